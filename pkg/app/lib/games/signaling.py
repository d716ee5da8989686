"""
Near-optimal symmetric signaling for explicit Bayesian games.

Every profile of the strategy net gets the polytope of posteriors under which
it is an approximate equilibrium; the best split of the prior across those
polytopes is a single LP in the scaled variables gamma_s = alpha_s * mu_s.
"""

import logging
import time
from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
from joblib import Parallel, delayed
from pydantic import BaseModel, ConfigDict, Field

from app.core.config import DEFAULT_ENUMERATION_CAP, DEFAULT_TOLERANCES, N_JOBS, Tolerances
from app.core.errors import DecompositionInfeasibleError, InstanceValidationError, InternalSolverError
from app.lib.games.equilibrium_net import (
    EquilibriumConcept, NetParams, check_equilibrium, enumerate_net, enumerate_profiles,
)
from app.lib.games.posterior_polytope import PosteriorPolytope, build_polytope, polytope_nonempty
from app.lib.lp import LinearProgram, LpStatus, solve_lp
from app.lib.model import BayesianGame, MixedProfile, SignalingScheme, objective_weights, posterior_game

logger = logging.getLogger(__name__)


class GameSolveOptions(BaseModel):
    model_config = ConfigDict(frozen=True)

    epsilon: float = Field(gt=0)
    delta: float = Field(default=0.0, ge=0)
    concept: EquilibriumConcept = EquilibriumConcept.NE
    net_size: Optional[int] = Field(default=None, ge=1)
    stackelberg_leader: Optional[int] = Field(default=None, ge=0)
    reduce_signals: bool = False
    enumeration_cap: int = Field(default=DEFAULT_ENUMERATION_CAP, ge=1)
    n_jobs: int = N_JOBS

    @property
    def slack(self) -> float:
        return self.epsilon + self.delta

    def excluded_players(self) -> FrozenSet[int]:
        return frozenset() if self.stackelberg_leader is None else frozenset({self.stackelberg_leader})


@dataclass(frozen=True, eq=False)
class Candidate:
    profile: MixedProfile
    polytope: PosteriorPolytope
    weights: np.ndarray


@dataclass(frozen=True)
class SignalDiagnostics:
    value: float
    accepted: bool
    regret: float
    worst_violation: float
    row_count: int


@dataclass(frozen=True)
class NetStatistics:
    multiset_size: int
    from_formula: bool
    net_size: int
    profiles_total: int
    profiles_kept: int
    profiles_discarded: int


@dataclass(frozen=True, eq=False)
class GameSolveResult:
    scheme: SignalingScheme
    objective: float
    diagnostics: Tuple[SignalDiagnostics, ...]
    net: NetStatistics
    options: GameSolveOptions
    elapsed_sec: float = 0.0


def _screen_profile(game: BayesianGame, profile: MixedProfile, slack: float,
                    concept: EquilibriumConcept, excluded: FrozenSet[int],
                    tol: Tolerances) -> Optional[Candidate]:
    polytope = build_polytope(game, profile, slack, concept, excluded, tol)
    if not polytope_nonempty(polytope, tol):
        return None
    return Candidate(profile=profile, polytope=polytope, weights=objective_weights(game, profile))


def screen_profiles(game: BayesianGame, profiles: Sequence[MixedProfile], slack: float,
                    concept: EquilibriumConcept = EquilibriumConcept.NE,
                    excluded_players: FrozenSet[int] = frozenset(),
                    tol: Tolerances = DEFAULT_TOLERANCES, n_jobs: int = 1) -> List[Candidate]:
    """
    Keep the profiles some posterior can induce as a `slack`-equilibrium, one
    candidate per distinct profile, in input order.
    """
    screened = Parallel(n_jobs=n_jobs)(
        delayed(_screen_profile)(game, x, slack, concept, excluded_players, tol) for x in profiles)
    unique = {}
    for candidate in screened:
        if candidate is not None:
            unique.setdefault(candidate.profile.key(), candidate)
    return list(unique.values())


def assemble_scheme(game: BayesianGame, candidates: Sequence[Candidate],
                    tol: Tolerances = DEFAULT_TOLERANCES) -> Tuple[SignalingScheme, float]:
    if not candidates:
        raise DecompositionInfeasibleError("no decomposition over supplied candidates")
    num_states = game.num_states
    t = len(candidates)

    blocks = [c.polytope.homogenized() for c in candidates]
    a_ub = np.zeros((sum(b.shape[0] for b in blocks), t * num_states))
    row = 0
    for s, block in enumerate(blocks):
        a_ub[row:row + block.shape[0], s * num_states:(s + 1) * num_states] = block
        row += block.shape[0]
    a_eq = np.tile(np.eye(num_states), (1, t))
    c = np.concatenate([cand.weights for cand in candidates])

    result = solve_lp(LinearProgram.build(c, a_ub, np.zeros(a_ub.shape[0]), a_eq, game.prior), tol)
    if result.status is LpStatus.INFEASIBLE:
        raise DecompositionInfeasibleError("no decomposition over supplied candidates")
    if result.status is LpStatus.UNBOUNDED:
        raise InternalSolverError("decomposition LP reported unbounded")

    gamma = result.x.reshape(t, num_states)
    alpha = gamma.sum(axis=1)
    keep = np.flatnonzero(alpha >= tol.drop_eps)
    posteriors = gamma[keep] / alpha[keep, None]
    values = np.array([candidates[s].weights @ mu for s, mu in zip(keep, posteriors)])
    scheme = SignalingScheme(
        weights=alpha[keep],
        posteriors=posteriors,
        profiles=tuple(candidates[s].profile for s in keep),
        values=values,
    )
    logger.info("decomposition LP: %d candidates, %d signals, value %.6f, %d pivots",
                t, keep.size, result.value, result.pivots)
    return scheme, float(alpha[keep] @ values)


def _affine_dependency(points: np.ndarray, max_support: int, rank_tol: float) -> Optional[np.ndarray]:
    """A nonzero z with points @ z = 0, or None when the columns are independent."""
    k = points.shape[1]
    if k < 2:
        return None
    null = scipy.linalg.null_space(points, rcond=rank_tol)
    if null.shape[1]:
        return null[:, -1]
    if k > max_support:
        # numerically full rank although a dependency must exist
        _, _, vh = scipy.linalg.svd(points)
        return vh[-1]
    return None


def reduce_signals(scheme: SignalingScheme, tol: Tolerances = DEFAULT_TOLERANCES,
                   rank_tol: float = 1e-9) -> SignalingScheme:
    """
    Caratheodory reduction: shift weight along affine dependencies of the
    points (v_s, mu_s) until they are affinely independent, which leaves at
    most M+1 signals and keeps both the prior split and the objective.
    """
    if scheme.values is None:
        raise ValueError("reduce_signals needs per-signal values")
    num_states = scheme.posteriors.shape[1]
    weights = scheme.weights.astype(float).copy()
    active = [s for s in range(scheme.num_signals) if weights[s] >= tol.drop_eps]

    while True:
        points = np.vstack([scheme.values[active], scheme.posteriors[active].T, np.ones(len(active))])
        direction = _affine_dependency(points, num_states + 1, rank_tol)
        if direction is None:
            break
        if not np.any(direction > rank_tol):
            direction = -direction
        current = weights[active]
        positive = np.flatnonzero(direction > rank_tol)
        ratios = current[positive] / direction[positive]
        leaving = positive[int(np.argmin(ratios))]
        shifted = np.maximum(current - ratios.min() * direction, 0.0)
        shifted[leaving] = 0.0
        weights[active] = shifted
        active = [s for s in active if weights[s] >= tol.drop_eps]

    logger.info("signal reduction: %d -> %d signals", scheme.num_signals, len(active))
    return SignalingScheme(
        weights=weights[active],
        posteriors=scheme.posteriors[active],
        profiles=tuple(scheme.profiles[s] for s in active) if scheme.profiles is not None else None,
        values=scheme.values[active],
    )


def revelation_baselines(game: BayesianGame, candidates: Sequence[Candidate],
                         tol: Tolerances = DEFAULT_TOLERANCES) -> Tuple[float, float]:
    """
    (full revelation, no revelation) values when each fixed posterior gets its
    best candidate whose polytope contains it; -inf when none does.
    """
    full = 0.0
    for theta in range(game.num_states):
        point = np.eye(game.num_states)[theta]
        values = [c.weights[theta] for c in candidates if c.polytope.contains(point, tol)]
        if not values:
            full = -np.inf
            break
        full += game.prior[theta] * max(values)
    at_prior = [c.weights @ game.prior for c in candidates if c.polytope.contains(game.prior, tol)]
    return float(full), float(max(at_prior)) if at_prior else -np.inf


def solve_game_signaling(game: BayesianGame, opts: GameSolveOptions,
                         tol: Tolerances = DEFAULT_TOLERANCES) -> GameSolveResult:
    """
    Near-optimal public signaling scheme over the strategy net.

    Args:
        game: Validated Bayesian game
        opts: Concept, slack, leader and net options
        tol: Numerical tolerances

    Returns:
        GameSolveResult with the scheme, its objective value, per-signal
        diagnostics and net statistics
    """
    started = time.perf_counter()
    n, m = game.num_players, game.num_actions
    if opts.stackelberg_leader is not None and opts.stackelberg_leader >= n:
        raise InstanceValidationError(
            f"leader {opts.stackelberg_leader} is not one of the {n} players", field="stackelberg_leader")

    params = NetParams.resolve(opts.net_size, n, m, opts.epsilon)
    net = enumerate_net(m, params.multiset_size, opts.enumeration_cap)
    profiles = enumerate_profiles(net, n, opts.enumeration_cap)
    logger.info("net: multiset size %d, %d strategies, %d profiles",
                params.multiset_size, len(net), len(profiles))

    excluded = opts.excluded_players()
    candidates = screen_profiles(game, profiles, opts.slack, opts.concept, excluded, tol, opts.n_jobs)
    logger.info("%d of %d profiles can be induced", len(candidates), len(profiles))

    scheme, _ = assemble_scheme(game, candidates, tol)
    if opts.reduce_signals:
        scheme = reduce_signals(scheme, tol)

    rows = {c.profile.key(): c.polytope.row_count for c in candidates}
    diagnostics = []
    for mu, profile, value in zip(scheme.posteriors, scheme.profiles, scheme.values):
        check = check_equilibrium(posterior_game(game, mu).payoffs, profile, opts.slack,
                                  opts.concept, excluded, tol)
        if not check.accepted:
            raise InternalSolverError(
                f"signal profile misses the equilibrium check by {check.worst_violation:.3e}")
        diagnostics.append(SignalDiagnostics(
            value=float(value), accepted=check.accepted, regret=check.regret,
            worst_violation=check.worst_violation, row_count=rows[profile.key()],
        ))

    return GameSolveResult(
        scheme=scheme,
        objective=float(scheme.weights @ scheme.values),
        diagnostics=tuple(diagnostics),
        net=NetStatistics(
            multiset_size=params.multiset_size,
            from_formula=params.from_formula,
            net_size=len(net),
            profiles_total=len(profiles),
            profiles_kept=len(candidates),
            profiles_discarded=len(profiles) - len(candidates),
        ),
        options=opts,
        elapsed_sec=time.perf_counter() - started,
    )
