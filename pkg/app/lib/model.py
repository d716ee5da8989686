"""
Domain types shared by the game and auction solvers.

Tensors over action profiles use numpy's row-major layout with player 1's
action as the most significant index, so a flat list read from a file maps
to the in-memory tensor with a plain `reshape`.
"""

import logging
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from app.core.config import DEFAULT_TOLERANCES, Tolerances
from app.core.errors import InstanceValidationError

logger = logging.getLogger(__name__)

SUM_TOLERANCE = 1e-9

# Entry t names the winning bidder (0-based) under valuation matrix t
WinnerTuple = Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class BayesianGame:
    """
    Explicit Bayesian normal-form game.

    payoffs has shape (n, M, m, ..., m), objective has shape (M, m, ..., m).
    `state_index` lists the original state of every kept state once zero-mass
    states have been removed by validation.
    """
    prior: np.ndarray
    payoffs: np.ndarray
    objective: np.ndarray
    state_index: Optional[Tuple[int, ...]] = None
    num_original_states: Optional[int] = None

    @property
    def num_players(self) -> int:
        return self.payoffs.shape[0]

    @property
    def num_states(self) -> int:
        return self.prior.shape[0]

    @property
    def num_actions(self) -> int:
        return self.payoffs.shape[2] if self.payoffs.ndim > 2 else 1

    @classmethod
    def from_flat(cls, num_players: int, num_actions: int, num_states: int,
                  prior: Sequence[float], payoffs: Sequence[Sequence[Sequence[float]]],
                  objective: Sequence[Sequence[float]]) -> "BayesianGame":
        """Build a game from per-(player, state) flattened tensors of length m^n."""
        shape = (num_actions,) * num_players
        size = num_actions ** num_players
        prior_arr = _as_vector(prior, num_states, "prior")
        if len(payoffs) != num_players:
            raise InstanceValidationError(
                f"expected {num_players} players, got {len(payoffs)}", field="payoffs")
        slices = []
        for i, per_state in enumerate(payoffs):
            if len(per_state) != num_states:
                raise InstanceValidationError(
                    f"expected {num_states} states, got {len(per_state)}", field=f"payoffs[{i}]")
            for theta, flat in enumerate(per_state):
                if len(flat) != size:
                    raise InstanceValidationError(
                        f"expected {size} entries, got {len(flat)}", field=f"payoffs[{i}][{theta}]")
            slices.append(np.asarray(per_state, dtype=float).reshape((num_states,) + shape))
        if len(objective) != num_states:
            raise InstanceValidationError(
                f"expected {num_states} states, got {len(objective)}", field="objective")
        for theta, flat in enumerate(objective):
            if len(flat) != size:
                raise InstanceValidationError(
                    f"expected {size} entries, got {len(flat)}", field=f"objective[{theta}]")
        payoff_arr = np.stack(slices) if slices else np.zeros((0, num_states) + shape)
        objective_arr = np.asarray(objective, dtype=float).reshape((num_states,) + shape)
        return cls(prior=prior_arr, payoffs=payoff_arr, objective=objective_arr)


@dataclass(frozen=True, eq=False)
class AuctionInstance:
    """
    Bayesian second-price auction with an explicit valuation distribution.

    valuations has shape (r, n, M): support matrix t, bidder i, state theta.
    """
    prior: np.ndarray
    valuations: np.ndarray
    probabilities: np.ndarray
    num_signals: Optional[int] = None
    state_index: Optional[Tuple[int, ...]] = None
    num_original_states: Optional[int] = None

    @property
    def num_bidders(self) -> int:
        return self.valuations.shape[1]

    @property
    def num_states(self) -> int:
        return self.prior.shape[0]

    @property
    def support_size(self) -> int:
        return self.valuations.shape[0]


@dataclass(frozen=True, eq=False)
class MixedProfile:
    strategies: Tuple[np.ndarray, ...]

    @classmethod
    def of(cls, *strategies: Sequence[float]) -> "MixedProfile":
        return cls(tuple(np.asarray(x, dtype=float) for x in strategies))

    @classmethod
    def pure(cls, actions: Sequence[int], num_actions: int) -> "MixedProfile":
        return cls(tuple(np.eye(num_actions)[a] for a in actions))

    @property
    def num_players(self) -> int:
        return len(self.strategies)

    def key(self) -> Tuple[Tuple[float, ...], ...]:
        """Exact-equality key used to deduplicate net profiles."""
        return tuple(tuple(float(v) for v in x) for x in self.strategies)

    def validate(self) -> "MixedProfile":
        for i, x in enumerate(self.strategies):
            if np.any(x < 0) or abs(x.sum() - 1.0) > SUM_TOLERANCE:
                raise InstanceValidationError(
                    "mixed strategy is not a probability vector", field=f"profile[{i}]")
        return self

    def to_lists(self):
        return [x.tolist() for x in self.strategies]


@dataclass(frozen=True, eq=False)
class SignalingScheme:
    """
    Convex decomposition of the prior: signal s is sent with probability
    weights[s] and induces posterior posteriors[s].
    """
    weights: np.ndarray
    posteriors: np.ndarray
    profiles: Optional[Tuple[Optional[MixedProfile], ...]] = None
    values: Optional[np.ndarray] = None
    assignment: Optional[Tuple[int, ...]] = None

    @property
    def num_signals(self) -> int:
        return self.weights.shape[0]

    @classmethod
    def from_assignment(cls, prior: np.ndarray, assignment: Sequence[int]) -> "SignalingScheme":
        """
        Deterministic scheme. Unused signal labels are dropped and the rest are
        renumbered in increasing label order.
        """
        assignment = np.asarray(assignment, dtype=int)
        if assignment.shape != prior.shape:
            raise InstanceValidationError(
                f"assignment has {assignment.size} entries for {prior.size} states", field="assignment")
        labels = sorted({int(a) for a, p in zip(assignment, prior) if p > 0})
        relabel = {label: s for s, label in enumerate(labels)}
        weights = np.zeros(len(labels))
        posteriors = np.zeros((len(labels), prior.size))
        for theta, label in enumerate(assignment):
            if prior[theta] <= 0:
                continue
            s = relabel[int(label)]
            weights[s] += prior[theta]
            posteriors[s, theta] = prior[theta]
        posteriors /= weights[:, None]
        compact = tuple(relabel.get(int(a), 0) for a in assignment)
        return cls(weights=weights, posteriors=posteriors, assignment=compact)

    def decomposition_residual(self, prior: np.ndarray) -> float:
        """Largest violation of sum(weights) = 1 and sum(weights * posteriors) = prior."""
        mass = abs(float(self.weights.sum()) - 1.0)
        mixture = float(np.max(np.abs(self.weights @ self.posteriors - prior))) if self.num_signals else 1.0
        return max(mass, mixture)


@dataclass(frozen=True)
class PosteriorGame:
    """Complete-information game induced by a posterior belief."""
    payoffs: np.ndarray
    objective: np.ndarray


Instance = Union[BayesianGame, AuctionInstance]


def _as_vector(values: Sequence[float], length: int, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.shape != (length,):
        raise InstanceValidationError(f"expected length {length}, got {arr.size}", field=name)
    return arr


def _check_distribution(values: np.ndarray, name: str, label: str):
    if not np.all(np.isfinite(values)):
        raise InstanceValidationError("non-finite entry", field=name)
    if np.any(values < 0):
        raise InstanceValidationError(f"{label} has a negative entry", field=name)
    if abs(float(values.sum()) - 1.0) > SUM_TOLERANCE:
        raise InstanceValidationError(f"{label} does not sum to 1", field=name)


def validate_game(game: BayesianGame) -> BayesianGame:
    n = game.payoffs.shape[0] if game.payoffs.ndim >= 2 else 0
    if n < 1:
        raise InstanceValidationError("a game needs at least one player", field="payoffs")
    m = game.num_actions
    expected = (n, game.num_states) + (m,) * n
    if game.payoffs.shape != expected:
        raise InstanceValidationError(
            f"shape {game.payoffs.shape} does not match {expected}", field="payoffs")
    if game.objective.shape != expected[1:]:
        raise InstanceValidationError(
            f"shape {game.objective.shape} does not match {expected[1:]}", field="objective")
    _check_distribution(game.prior, "prior", "prior")
    if not np.all(np.isfinite(game.payoffs)) or np.any(np.abs(game.payoffs) > 1):
        raise InstanceValidationError("payoff outside [-1,1]", field="payoffs")
    if not np.all(np.isfinite(game.objective)) or np.any(np.abs(game.objective) > 1):
        raise InstanceValidationError("objective outside [-1,1]", field="objective")

    keep = np.flatnonzero(game.prior > 0)
    if keep.size == game.num_states:
        return game
    logger.info("dropping %d zero-mass states", game.num_states - keep.size)
    return BayesianGame(
        prior=game.prior[keep],
        payoffs=game.payoffs[:, keep],
        objective=game.objective[keep],
        state_index=tuple(int(t) for t in keep),
        num_original_states=game.num_states,
    )


def validate_auction(auction: AuctionInstance) -> AuctionInstance:
    if auction.valuations.ndim != 3:
        raise InstanceValidationError("valuations must be r matrices of shape n x M", field="valuations")
    r, n, num_states = auction.valuations.shape
    if num_states != auction.num_states:
        raise InstanceValidationError(
            f"valuation matrices have {num_states} columns for {auction.num_states} states",
            field="valuations")
    if n < 1 or r < 1:
        raise InstanceValidationError("need at least one bidder and one valuation matrix", field="valuations")
    if auction.probabilities.shape != (r,):
        raise InstanceValidationError(
            f"expected {r} probabilities, got {auction.probabilities.size}", field="probabilities")
    _check_distribution(auction.prior, "prior", "prior")
    _check_distribution(auction.probabilities, "probabilities", "valuation probabilities")
    if not np.all(np.isfinite(auction.valuations)) or np.any(auction.valuations < 0) \
            or np.any(auction.valuations > 1):
        raise InstanceValidationError("valuation outside [0,1]", field="valuations")
    if auction.num_signals is not None and auction.num_signals < 1:
        raise InstanceValidationError("signal budget must be at least 1", field="num_signals")

    keep = np.flatnonzero(auction.prior > 0)
    if keep.size == auction.num_states:
        return auction
    logger.info("dropping %d zero-mass states", auction.num_states - keep.size)
    return replace(
        auction,
        prior=auction.prior[keep],
        valuations=auction.valuations[:, :, keep],
        state_index=tuple(int(t) for t in keep),
        num_original_states=auction.num_states,
    )


def validate_instance(raw: Instance) -> Instance:
    """Confirm all invariants and drop states of zero prior mass."""
    if isinstance(raw, BayesianGame):
        return validate_game(raw)
    if isinstance(raw, AuctionInstance):
        return validate_auction(raw)
    raise InstanceValidationError(f"unsupported instance type {type(raw).__name__}")


def _check_belief(mu: np.ndarray, num_states: int, slack: float = 1e-9) -> np.ndarray:
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (num_states,):
        raise InstanceValidationError(f"belief has length {mu.size}, expected {num_states}", field="posterior")
    if np.any(mu < -slack) or abs(mu.sum() - 1.0) > slack:
        raise InstanceValidationError("belief is outside the probability simplex", field="posterior")
    return mu


def posterior_game(game: BayesianGame, mu: Sequence[float]) -> PosteriorGame:
    mu = _check_belief(mu, game.num_states)
    return PosteriorGame(
        payoffs=np.tensordot(mu, game.payoffs, axes=([0], [1])),
        objective=np.tensordot(mu, game.objective, axes=1),
    )


def contract_profile(tensor: np.ndarray, profile: MixedProfile, lead: int = 0,
                     keep: Optional[int] = None) -> np.ndarray:
    """
    Contract the player axes of `tensor` (after `lead` batch axes) with the
    profile's strategies, leaving player `keep`'s axis last when given.
    """
    t = tensor
    if keep is not None:
        t = np.moveaxis(t, lead + keep, -1)
    for i, x in enumerate(profile.strategies):
        if i == keep:
            continue
        t = np.tensordot(t, x, axes=([lead], [0]))
    return t


def _check_tensor(tensor: np.ndarray, profile: MixedProfile, lead: int = 0):
    expected = tuple(x.shape[0] for x in profile.strategies)
    if tensor.shape[lead:] != expected:
        raise InstanceValidationError(
            f"tensor shape {tensor.shape[lead:]} does not match profile {expected}")


def expected_payoff(tensor: np.ndarray, profile: MixedProfile) -> float:
    _check_tensor(tensor, profile)
    return float(contract_profile(tensor, profile))


def deviation_payoffs(tensor: np.ndarray, profile: MixedProfile, player: int, lead: int = 0) -> np.ndarray:
    """A_i(j, x_-i) for every action j of `player`, with optional leading batch axes."""
    _check_tensor(tensor, profile, lead)
    return contract_profile(tensor, profile, lead=lead, keep=player)


def objective_weights(game: BayesianGame, profile: MixedProfile) -> np.ndarray:
    """w(theta) = E_{s ~ x}[F(theta, s)]."""
    _check_tensor(game.objective, profile, lead=1)
    return contract_profile(game.objective, profile, lead=1)


def evaluate_objective(game: BayesianGame, scheme: SignalingScheme,
                       tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    if scheme.profiles is None or len(scheme.profiles) != scheme.num_signals:
        raise InstanceValidationError("every signal needs an attached profile", field="profiles")
    total = 0.0
    for alpha, mu, profile in zip(scheme.weights, scheme.posteriors, scheme.profiles):
        if alpha < tol.drop_eps:
            continue
        if profile is None:
            raise InstanceValidationError("signal with positive weight has no profile", field="profiles")
        total += float(alpha) * expected_payoff(posterior_game(game, mu).objective, profile)
    return total


def _original_size(instance: Instance) -> int:
    return instance.num_original_states or instance.num_states


def expand_scheme(scheme: SignalingScheme, instance: Instance) -> SignalingScheme:
    """Re-index a scheme from the validated state space to the original one."""
    if instance.state_index is None:
        return scheme
    index = np.asarray(instance.state_index)
    posteriors = np.zeros((scheme.num_signals, _original_size(instance)))
    posteriors[:, index] = scheme.posteriors
    assignment = expand_assignment(scheme.assignment, instance) if scheme.assignment is not None else None
    return replace(scheme, posteriors=posteriors, assignment=assignment)


def restrict_posteriors(posteriors: np.ndarray, instance: Instance) -> Tuple[np.ndarray, float]:
    """Project original-space posteriors onto the kept states; also returns the dropped mass."""
    posteriors = np.asarray(posteriors, dtype=float)
    if instance.state_index is None:
        return posteriors, 0.0
    index = np.asarray(instance.state_index)
    kept = posteriors[:, index]
    dropped = float(np.max(np.abs(posteriors.sum(axis=1) - kept.sum(axis=1)))) if posteriors.size else 0.0
    return kept, dropped


def restrict_assignment(assignment: Sequence[int], instance: Instance) -> Tuple[int, ...]:
    if instance.state_index is None:
        return tuple(int(a) for a in assignment)
    return tuple(int(assignment[theta]) for theta in instance.state_index)


def expand_assignment(assignment: Sequence[int], instance: Instance) -> Tuple[int, ...]:
    """Original-space assignment; states dropped by validation get signal 0."""
    if instance.state_index is None:
        return tuple(int(a) for a in assignment)
    full = [0] * _original_size(instance)
    for theta, s in zip(instance.state_index, assignment):
        full[theta] = int(s)
    return tuple(full)
