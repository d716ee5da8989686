import heapq
import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from app.lib.auctions.welfare import as_tuple_array, tuple_scores, welfare_set_function
from app.lib.model import AuctionInstance, WinnerTuple

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GreedyResult:
    selected: Tuple[WinnerTuple, ...]
    gains: Tuple[float, ...]
    value: float


def _gain(column: np.ndarray, cover: np.ndarray) -> float:
    # fsum is exactly rounded, so naive and lazy rounds see identical gains
    return math.fsum(np.maximum(column - cover, 0.0))


def greedy_max(auction: AuctionInstance, ground, k: int, lazy: bool = False) -> GreedyResult:
    """
    Greedy maximization of the welfare set function under |W| <= k.

    Ties go to the lexicographically smallest tuple. Zero-gain rounds still
    add an element, so k >= |ground| returns the whole ground set.
    """
    ground = np.unique(as_tuple_array(auction, ground), axis=0)
    if ground.shape[0] == 0:
        raise ValueError("greedy needs a non-empty ground set")
    if k < 1:
        raise ValueError("k must be at least 1")
    scores = tuple_scores(auction, ground)
    cover = np.zeros(auction.num_states)
    rounds = min(k, ground.shape[0])
    chosen, gains = [], []

    if lazy:
        heap = [(-_gain(scores[:, j], cover), j) for j in range(ground.shape[0])]
        heapq.heapify(heap)
        fresh_in = [0] * ground.shape[0]
        for rnd in range(rounds):
            while True:
                neg_gain, j = heapq.heappop(heap)
                if fresh_in[j] == rnd:
                    break
                fresh_in[j] = rnd
                heapq.heappush(heap, (-_gain(scores[:, j], cover), j))
            chosen.append(j)
            gains.append(-neg_gain)
            cover = np.maximum(cover, scores[:, j])
    else:
        available = np.ones(ground.shape[0], dtype=bool)
        for _ in range(rounds):
            marginal = np.array([_gain(scores[:, j], cover) if available[j] else -np.inf
                                 for j in range(ground.shape[0])])
            j = int(np.argmax(marginal))
            chosen.append(j)
            gains.append(float(marginal[j]))
            available[j] = False
            cover = np.maximum(cover, scores[:, j])

    selected = tuple(tuple(int(v) for v in ground[j]) for j in chosen)
    logger.debug("greedy picked %s with gains %s", selected, gains)
    return GreedyResult(selected=selected, gains=tuple(gains),
                        value=welfare_set_function(auction, selected))
