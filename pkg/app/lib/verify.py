"""
Independent re-checking of scheme documents against an instance.

Nothing here trusts the solver: objective values, equilibrium conditions and
welfare are all recomputed from the instance.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Union

import numpy as np

from app.core.config import DEFAULT_TOLERANCES, Tolerances
from app.core.errors import InstanceValidationError
from app.lib.auctions.welfare import welfare_of_scheme
from app.lib.games.equilibrium_net import check_equilibrium
from app.lib.model import (
    AuctionInstance, BayesianGame, Instance, MixedProfile, expected_payoff, posterior_game,
    restrict_assignment, restrict_posteriors,
)
from app.schemas.scheme import AuctionSchemeFile, GameSchemeFile

logger = logging.getLogger(__name__)


@dataclass
class VerificationReport:
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, message: str):
        logger.info("verification failure: %s", message)
        self.failures.append(message)


def _profile(raw, game: BayesianGame) -> MixedProfile:
    strategies = [np.asarray(x, dtype=float) for x in raw]
    if len(strategies) != game.num_players or any(x.shape != (game.num_actions,) for x in strategies):
        raise InstanceValidationError(
            f"expected {game.num_players} strategies over {game.num_actions} actions", field="profile")
    return MixedProfile(tuple(strategies)).validate()


def verify_game_scheme(game: BayesianGame, document: GameSchemeFile,
                       tol: Tolerances = DEFAULT_TOLERANCES) -> VerificationReport:
    report = VerificationReport()
    eps = tol.verify_eps
    meta = document.metadata
    if not document.signals:
        report.fail("scheme has no signals")
        return report

    alphas = np.array([s.alpha for s in document.signals])
    raw = [s.posterior for s in document.signals]
    if any(len(mu) != (game.num_original_states or game.num_states) for mu in raw):
        report.fail("posterior length does not match the number of states")
        return report
    posteriors, dropped = restrict_posteriors(np.array(raw), game)
    if dropped > eps:
        report.fail(f"posterior puts mass {dropped:.3g} on a zero-prior state")

    if np.any(alphas < -eps):
        report.fail("negative signal probability")
    if abs(alphas.sum() - 1.0) > eps:
        report.fail(f"signal probabilities sum to {alphas.sum():.12g}")
    residual = float(np.max(np.abs(alphas @ posteriors - game.prior)))
    if residual > eps:
        report.fail(f"posteriors do not average to the prior (residual {residual:.3g})")

    excluded = frozenset() if meta.stackelberg_leader is None else {meta.stackelberg_leader}
    total = 0.0
    for j, (signal, mu) in enumerate(zip(document.signals, posteriors)):
        if np.any(mu < -eps) or abs(mu.sum() - 1.0) > eps:
            report.fail(f"signal {j}: posterior is not a distribution")
            continue
        mu = np.clip(mu, 0.0, None)
        mu = mu / mu.sum()
        try:
            profile = _profile(signal.profile, game)
        except InstanceValidationError as exc:
            report.fail(f"signal {j}: {exc.detail}")
            continue
        local = posterior_game(game, mu)
        value = expected_payoff(local.objective, profile)
        if abs(value - signal.objective_value) > eps:
            report.fail(f"signal {j}: objective {signal.objective_value:.12g}, recomputed {value:.12g}")
        check = check_equilibrium(local.payoffs, profile, meta.epsilon + meta.delta, meta.concept,
                                  excluded, tol)
        if not check.accepted:
            report.fail(f"signal {j}: not a {meta.concept.value} at {meta.epsilon + meta.delta:g} "
                        f"(regret {check.regret:.6g})")
        total += signal.alpha * value

    if not report.failures and abs(total - document.objective) > eps:
        report.fail(f"objective {document.objective:.12g}, recomputed {total:.12g}")
    return report


def verify_auction_scheme(auction: AuctionInstance, document: AuctionSchemeFile,
                          tol: Tolerances = DEFAULT_TOLERANCES) -> VerificationReport:
    report = VerificationReport()
    expected = auction.num_original_states or auction.num_states
    if len(document.assignment) != expected:
        report.fail(f"assignment has {len(document.assignment)} entries, expected {expected}")
        return report
    if any(s < 0 or s >= document.k for s in document.assignment):
        report.fail(f"assignment uses a signal outside 0..{document.k - 1}")
    if len(document.winner_tuples) > document.k:
        report.fail(f"{len(document.winner_tuples)} winner tuples for {document.k} signals")
    if report.failures:
        return report
    welfare = welfare_of_scheme(auction, restrict_assignment(document.assignment, auction))
    if not math.isclose(welfare, document.welfare, rel_tol=0.0, abs_tol=tol.verify_eps):
        report.fail(f"welfare {document.welfare:.12g}, recomputed {welfare:.12g}")
    return report


def verify_scheme(instance: Instance, document: Union[GameSchemeFile, AuctionSchemeFile],
                  tol: Tolerances = DEFAULT_TOLERANCES) -> VerificationReport:
    if isinstance(instance, BayesianGame) and isinstance(document, GameSchemeFile):
        return verify_game_scheme(instance, document, tol)
    if isinstance(instance, AuctionInstance) and isinstance(document, AuctionSchemeFile):
        return verify_auction_scheme(instance, document, tol)
    raise InstanceValidationError(f"{document.kind} scheme does not match the instance", field="kind")
