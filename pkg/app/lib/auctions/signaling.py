import logging
import time
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

from app.core.config import DEFAULT_ENUMERATION_CAP
from app.core.errors import InstanceValidationError
from app.lib.auctions.greedy import greedy_max
from app.lib.auctions.welfare import recover_scheme
from app.lib.auctions.winner_net import WinnerNetParams, enumerate_winner_net, full_winner_ground
from app.lib.model import AuctionInstance, WinnerTuple

logger = logging.getLogger(__name__)


class GroundSet(str, Enum):
    NET = "net"
    FULL = "full"


@dataclass(frozen=True)
class AuctionSolveResult:
    assignment: Tuple[int, ...]
    welfare: float
    winner_tuples: Tuple[WinnerTuple, ...]
    gains: Tuple[float, ...]
    num_signals: int
    ground_size: int
    multiset_size: Optional[int] = None
    num_samples: Optional[int] = None
    seed: Optional[int] = None
    elapsed_sec: float = 0.0


def solve_auction_signaling(auction: AuctionInstance, k: int, epsilon: float,
                            params: Optional[WinnerNetParams] = None,
                            ground: GroundSet = GroundSet.NET, lazy: bool = False) -> AuctionSolveResult:
    """
    Greedy over the winner-tuple net (or over all of [n]^r with
    `ground=GroundSet.FULL`), then the best assignment for the chosen tuples.
    """
    started = time.perf_counter()
    if k < 1:
        raise InstanceValidationError("k must be at least 1", field="k")
    if not epsilon > 0:
        raise InstanceValidationError("epsilon must be positive", field="epsilon")

    if ground is GroundSet.FULL:
        multiset_size = None
        tuples = full_winner_ground(auction, params.enumeration_cap if params else DEFAULT_ENUMERATION_CAP)
    else:
        params = params or WinnerNetParams.resolve(None, auction, epsilon)
        multiset_size = params.multiset_size
        tuples = enumerate_winner_net(auction, params.multiset_size, params.enumeration_cap)

    greedy = greedy_max(auction, tuples, k, lazy=lazy)
    recovered = recover_scheme(auction, greedy.selected)
    logger.info("auction: ground %d tuples, %d picked, welfare %.6f",
                tuples.shape[0], len(greedy.selected), recovered.welfare)
    return AuctionSolveResult(
        assignment=recovered.assignment,
        welfare=recovered.welfare,
        winner_tuples=greedy.selected,
        gains=greedy.gains,
        num_signals=k,
        ground_size=int(tuples.shape[0]),
        multiset_size=multiset_size,
        elapsed_sec=time.perf_counter() - started,
    )
