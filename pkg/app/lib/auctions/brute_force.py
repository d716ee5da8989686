import itertools
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from app.core.config import BRUTE_FORCE_CAP
from app.core.errors import EnumerationCapError, InstanceValidationError
from app.lib.auctions.welfare import state_scores
from app.lib.model import AuctionInstance

logger = logging.getLogger(__name__)

CHUNK = 4096


@dataclass(frozen=True)
class BruteForceAuctionResult:
    welfare: float
    assignment: Tuple[int, ...]


def brute_force_auction(auction: AuctionInstance, k: int, cap: int = BRUTE_FORCE_CAP) -> BruteForceAuctionResult:
    """Optimal k-signal welfare over every assignment of states to signals."""
    if k < 1:
        raise InstanceValidationError("k must be at least 1", field="k")
    num_states = auction.num_states
    count = k ** num_states
    if count > cap:
        raise EnumerationCapError("assignment space", count, cap)
    g = state_scores(auction)
    labels = np.arange(k)
    best = BruteForceAuctionResult(-np.inf, ())
    assignments = itertools.product(range(k), repeat=num_states)
    while True:
        chunk = np.array(list(itertools.islice(assignments, CHUNK)), dtype=int)
        if chunk.size == 0:
            break
        onehot = (chunk[:, :, None] == labels).astype(float)
        totals = np.einsum("bms,mti->bsti", onehot, g)
        welfare = totals.max(axis=3).sum(axis=(1, 2))
        j = int(np.argmax(welfare))
        if welfare[j] > best.welfare:
            best = BruteForceAuctionResult(float(welfare[j]), tuple(int(s) for s in chunk[j]))
    logger.info("brute force: %d assignments, welfare %.6f", count, best.welfare)
    return best
