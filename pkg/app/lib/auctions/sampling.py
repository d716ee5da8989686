"""
Auction signaling when valuations are only available through a sampler.

The sampler is drawn from r times and the solver runs on the uniform
empirical distribution; r is set so that, with probability 1 - delta, every
one of the k^M deterministic schemes keeps its welfare within epsilon / 2.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np

from app.core.config import DEFAULT_SEED
from app.core.errors import InstanceValidationError
from app.lib.auctions.signaling import AuctionSolveResult, solve_auction_signaling
from app.lib.auctions.winner_net import WinnerNetParams
from app.lib.model import AuctionInstance, expand_assignment, validate_auction

logger = logging.getLogger(__name__)

Sampler = Callable[[np.random.Generator], np.ndarray]


@dataclass(frozen=True)
class UniformIidSampler:
    """Every valuation drawn independently from U[0, 1]."""
    num_bidders: int
    num_states: int

    def __call__(self, rng: np.random.Generator) -> np.ndarray:
        return rng.random((self.num_bidders, self.num_states))


@dataclass(frozen=True, eq=False)
class MixtureSampler:
    """Draws a support matrix of a finite valuation distribution by its probability."""
    valuations: np.ndarray
    probabilities: np.ndarray

    @classmethod
    def from_auction(cls, auction: AuctionInstance) -> "MixtureSampler":
        return cls(valuations=auction.valuations, probabilities=auction.probabilities)

    def __call__(self, rng: np.random.Generator) -> np.ndarray:
        return self.valuations[rng.choice(len(self.probabilities), p=self.probabilities)]


def sample_count(num_states: int, k: int, epsilon: float, delta: float) -> int:
    """r = ceil(2 (M ln k + ln(2 / delta)) / epsilon^2)."""
    if k < 1:
        raise InstanceValidationError("k must be at least 1", field="k")
    if not (epsilon > 0 and 0 < delta < 1):
        raise InstanceValidationError("need epsilon > 0 and 0 < delta < 1")
    return math.ceil(2 * (num_states * math.log(k) + math.log(2 / delta)) / epsilon ** 2)


def empirical_auction(samples: Sequence[np.ndarray], prior: np.ndarray,
                      num_signals: Optional[int] = None) -> AuctionInstance:
    """Uniform distribution over the samples, duplicates merged in first-seen order."""
    weights = {}
    matrices = {}
    for sample in samples:
        key = sample.tobytes()
        matrices.setdefault(key, sample)
        weights[key] = weights.get(key, 0) + 1
    total = len(samples)
    return AuctionInstance(
        prior=np.asarray(prior, dtype=float),
        valuations=np.stack(list(matrices.values())),
        probabilities=np.array([weights[key] / total for key in matrices]),
        num_signals=num_signals,
    )


def draw_samples(sampler: Sampler, count: int, seed: int, num_states: int) -> list:
    """`count` range-checked matrices from one generator seeded with `seed`."""
    rng = np.random.default_rng(seed)
    samples = []
    for _ in range(count):
        sample = np.asarray(sampler(rng), dtype=float)
        if sample.ndim != 2 or sample.shape[1] != num_states:
            raise InstanceValidationError(
                f"sampler returned shape {sample.shape}, expected (n, {num_states})", field="sampler")
        if not np.all(np.isfinite(sample)) or np.any(sample < 0) or np.any(sample > 1):
            raise InstanceValidationError("sampler emitted a valuation outside [0,1]", field="sampler")
        samples.append(sample)
    return samples


def solve_auction_sampled(sampler: Sampler, prior: Sequence[float], k: int, epsilon: float,
                          delta: float, seed: int = DEFAULT_SEED,
                          params: Optional[WinnerNetParams] = None,
                          lazy: bool = False) -> AuctionSolveResult:
    """
    Solve the auction on the empirical distribution of sample_count draws.

    Args:
        sampler: Callable returning one n x M valuation matrix per call
        prior: Distribution over the M states
        k: Number of signals
        epsilon: Additive welfare slack of the sample count and the net
        delta: Failure probability of the sample count
        seed: Seed of the generator handed to the sampler
        params: Winner-net size; the formula value when omitted
        lazy: Use the lazy greedy

    Returns:
        AuctionSolveResult in the prior's state space, with num_samples and seed set
    """
    prior = np.asarray(prior, dtype=float)
    count = sample_count(prior.size, k, epsilon, delta)
    samples = draw_samples(sampler, count, seed, prior.size)
    auction = validate_auction(empirical_auction(samples, prior, k))
    logger.info("sampled %d valuation matrices, %d distinct", count, auction.support_size)
    result = solve_auction_signaling(auction, k, epsilon, params, lazy=lazy)
    return replace(result, assignment=expand_assignment(result.assignment, auction),
                   num_samples=count, seed=seed)
