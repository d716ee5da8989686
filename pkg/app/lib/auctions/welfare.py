"""
Second-price welfare of signaling schemes and of winner-tuple sets.

With a deterministic scheme the winner in subgame (signal s, matrix t) is
the bidder with the largest posterior value, so welfare only needs the
per-state scores rho_t * lambda(theta) * V^t(i, theta).
"""

import logging
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from app.core.errors import InstanceValidationError
from app.lib.model import AuctionInstance, SignalingScheme, WinnerTuple

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RecoveredScheme:
    assignment: Tuple[int, ...]
    welfare: float
    tuple_welfare: float


def state_scores(auction: AuctionInstance) -> np.ndarray:
    """scores[theta, t, i] = rho_t * lambda(theta) * V^t(i, theta)."""
    return np.einsum("t,m,tim->mti", auction.probabilities, auction.prior, auction.valuations)


def as_tuple_array(auction: AuctionInstance, tuples) -> np.ndarray:
    arr = np.asarray(tuples, dtype=int)
    r = auction.support_size
    if arr.size == 0:
        return np.zeros((0, r), dtype=int)
    arr = arr.reshape(-1, arr.shape[-1]) if arr.ndim > 1 else arr.reshape(1, -1)
    if arr.shape[1] != r:
        raise InstanceValidationError(f"winner tuples must have length {r}, got {arr.shape[1]}")
    if np.any(arr < 0) or np.any(arr >= auction.num_bidders):
        raise InstanceValidationError(f"winner tuple names a bidder outside 0..{auction.num_bidders - 1}")
    return arr


def tuple_scores(auction: AuctionInstance, tuples) -> np.ndarray:
    """scores[theta, w] = sum_t rho_t * lambda(theta) * V^t(w(t), theta) for each tuple w."""
    arr = as_tuple_array(auction, tuples)
    g = state_scores(auction)
    return g[:, np.arange(auction.support_size)[None, :], arr].sum(axis=-1)


def welfare_set_function(auction: AuctionInstance, tuples: Sequence[WinnerTuple]) -> float:
    arr = as_tuple_array(auction, list(tuples))
    if arr.shape[0] == 0:
        return 0.0
    return float(tuple_scores(auction, arr).max(axis=1).sum())


def welfare_of_scheme(auction: AuctionInstance,
                      scheme: Union[SignalingScheme, Sequence[int]]) -> float:
    """Expected second-price welfare of a randomized scheme or a deterministic assignment."""
    if isinstance(scheme, SignalingScheme) and scheme.assignment is None:
        if scheme.posteriors.shape[1] != auction.num_states:
            raise InstanceValidationError(
                f"scheme covers {scheme.posteriors.shape[1]} states, auction has {auction.num_states}")
        mass = scheme.weights[:, None] * scheme.posteriors
        values = np.einsum("sm,tim->sti", mass, auction.valuations)
        return float(values.max(axis=2).sum(axis=0) @ auction.probabilities)

    assignment = np.asarray(scheme.assignment if isinstance(scheme, SignalingScheme) else scheme, dtype=int)
    if assignment.shape != (auction.num_states,):
        raise InstanceValidationError(
            f"assignment has {assignment.size} entries, auction has {auction.num_states} states",
            field="assignment")
    if np.any(assignment < 0):
        raise InstanceValidationError("assignment has a negative signal", field="assignment")
    g = state_scores(auction)
    totals = np.zeros((int(assignment.max()) + 1,) + g.shape[1:])
    np.add.at(totals, assignment, g)
    return float(totals.max(axis=2).sum())


def recover_scheme(auction: AuctionInstance, tuples: Sequence[WinnerTuple]) -> RecoveredScheme:
    """Send every state to the lowest-index signal whose winner tuple scores best on it."""
    scores = tuple_scores(auction, list(tuples))
    assignment = tuple(int(s) for s in np.argmax(scores, axis=1))
    welfare = welfare_of_scheme(auction, assignment)
    tuple_welfare = float(scores.max(axis=1).sum())
    if welfare < tuple_welfare - 1e-9:
        logger.warning("recovered welfare %.12f below tuple welfare %.12f", welfare, tuple_welfare)
    return RecoveredScheme(assignment=assignment, welfare=welfare, tuple_welfare=tuple_welfare)
