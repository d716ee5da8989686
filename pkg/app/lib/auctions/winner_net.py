import itertools
import logging
import math
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from app.core.config import DEFAULT_ENUMERATION_CAP
from app.core.errors import EnumerationCapError, InstanceValidationError
from app.lib.model import AuctionInstance

logger = logging.getLogger(__name__)

CHUNK = 4096


class WinnerNetParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    multiset_size: int = Field(ge=1)
    enumeration_cap: int = Field(default=DEFAULT_ENUMERATION_CAP, ge=1)
    from_formula: bool = False

    @classmethod
    def formula_default(cls, num_bidders: int, support_size: int, epsilon: float,
                      enumeration_cap: int = DEFAULT_ENUMERATION_CAP) -> "WinnerNetParams":
        size = math.ceil(2 * math.log(4 * num_bidders * support_size) / epsilon ** 2)
        return cls(multiset_size=max(size, 1), enumeration_cap=enumeration_cap, from_formula=True)

    @classmethod
    def resolve(cls, override: Optional[int], auction: AuctionInstance, epsilon: float,
                enumeration_cap: int = DEFAULT_ENUMERATION_CAP) -> "WinnerNetParams":
        if override is not None:
            if override < 1:
                raise InstanceValidationError("net multiset size must be at least 1", field="net_multiset_size")
            return cls(multiset_size=override, enumeration_cap=enumeration_cap)
        if not epsilon > 0:
            raise InstanceValidationError("epsilon must be positive", field="epsilon")
        return cls.formula_default(auction.num_bidders, auction.support_size, epsilon, enumeration_cap)


def enumerate_winner_net(auction: AuctionInstance, multiset_size: int,
                         cap: int = DEFAULT_ENUMERATION_CAP) -> np.ndarray:
    """
    Winner tuples induced by multisets Y of states of size `multiset_size`:
    under matrix t the winner is the lowest-index bidder with the largest
    mean value over Y. Rows are unique and sorted lexicographically.
    """
    if multiset_size < 1:
        raise ValueError("multiset size must be positive")
    num_states = auction.num_states
    count = math.comb(num_states + multiset_size - 1, multiset_size)
    if count > cap:
        raise EnumerationCapError("winner-tuple net", count, cap)

    found = []
    multisets = itertools.combinations_with_replacement(range(num_states), multiset_size)
    while True:
        chunk = list(itertools.islice(multisets, CHUNK))
        if not chunk:
            break
        counts = np.array([np.bincount(y, minlength=num_states) for y in chunk], dtype=float)
        # summed rather than averaged values: same argmax, exact ties stay exact
        totals = np.einsum("bm,tim->bti", counts, auction.valuations)
        found.append(np.argmax(totals, axis=2))
    net = np.unique(np.vstack(found), axis=0)
    logger.info("winner net: %d multisets, %d distinct tuples", count, net.shape[0])
    return net


def full_winner_ground(auction: AuctionInstance, cap: int = DEFAULT_ENUMERATION_CAP) -> np.ndarray:
    """Every tuple in [n]^r, for the exhaustive-ground greedy."""
    count = auction.num_bidders ** auction.support_size
    if count > cap:
        raise EnumerationCapError("winner-tuple ground set", count, cap)
    return np.array(list(itertools.product(range(auction.num_bidders), repeat=auction.support_size)),
                    dtype=int)
