import itertools
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import AbstractSet, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from app.core.config import DEFAULT_ENUMERATION_CAP, DEFAULT_TOLERANCES, Tolerances
from app.core.errors import EnumerationCapError, InstanceValidationError
from app.lib.model import MixedProfile, deviation_payoffs

logger = logging.getLogger(__name__)


class EquilibriumConcept(str, Enum):
    NE = "ne"
    WSNE = "wsne"


class NetParams(BaseModel):
    """Multiset size of the uniform-on-multiset strategy net."""
    model_config = ConfigDict(frozen=True)

    multiset_size: int = Field(ge=1)
    from_formula: bool = False

    @classmethod
    def formula_default(cls, num_players: int, num_actions: int, epsilon: float) -> "NetParams":
        n1 = (num_players + 1) ** 2
        size = math.ceil(3 * n1 * math.log(n1 * num_actions) / epsilon ** 2)
        return cls(multiset_size=max(size, 1), from_formula=True)

    @classmethod
    def resolve(cls, override: Optional[int], num_players: int, num_actions: int,
                epsilon: float) -> "NetParams":
        if override is not None:
            if override < 1:
                raise InstanceValidationError("net size must be at least 1", field="net_size")
            return cls(multiset_size=override)
        if not epsilon > 0:
            raise InstanceValidationError("epsilon must be positive", field="epsilon")
        return cls.formula_default(num_players, num_actions, epsilon)


@dataclass(frozen=True)
class EquilibriumCheck:
    accepted: bool
    regret: float
    worst_violation: float


def enumerate_net(num_actions: int, multiset_size: int,
                  cap: int = DEFAULT_ENUMERATION_CAP) -> np.ndarray:
    """
    All strategies uniform on a multiset of `multiset_size` actions, one row
    each, in lexicographic multiset order.
    """
    if num_actions < 1 or multiset_size < 1:
        raise ValueError("net needs at least one action and a positive multiset size")
    size = math.comb(num_actions + multiset_size - 1, multiset_size)
    if size > cap:
        raise EnumerationCapError("strategy net", size, cap)
    net = np.zeros((size, num_actions))
    for row, multiset in enumerate(
            itertools.combinations_with_replacement(range(num_actions), multiset_size)):
        net[row] = np.bincount(multiset, minlength=num_actions) / multiset_size
    return net


def enumerate_profiles(net: np.ndarray, num_players: int,
                       cap: int = DEFAULT_ENUMERATION_CAP) -> List[MixedProfile]:
    """
    Every profile that gives each player a strategy from the net.

    Args:
        net: Strategies, one per row, as returned by enumerate_net
        num_players: Number of players n
        cap: Largest allowed number of profiles

    Returns:
        The len(net)^n profiles, player 0 varying slowest
    """
    size = len(net) ** num_players
    if size > cap:
        raise EnumerationCapError("profile set", size, cap)
    return [MixedProfile(tuple(net[k] for k in combo))
            for combo in itertools.product(range(len(net)), repeat=num_players)]


def check_equilibrium(payoffs: np.ndarray, profile: MixedProfile, epsilon: float,
                      concept: EquilibriumConcept = EquilibriumConcept.NE,
                      excluded_players: AbstractSet[int] = frozenset(),
                      tol: Tolerances = DEFAULT_TOLERANCES) -> EquilibriumCheck:
    """
    payoffs stacks the complete-information tensors A_1..A_n. `regret` is the
    largest gain any checked player gets from deviating (over its support for WSNE).
    """
    regret = 0.0
    for i, x in enumerate(profile.strategies):
        if i in excluded_players:
            continue
        deviations = deviation_payoffs(payoffs[i], profile, i)
        best = float(deviations.max())
        if concept is EquilibriumConcept.NE:
            gain = best - float(deviations @ x)
        else:
            gain = best - float(deviations[x > tol.drop_eps].min())
        regret = max(regret, gain)
    return EquilibriumCheck(
        accepted=regret <= epsilon + tol.verify_eps,
        regret=regret,
        worst_violation=regret - epsilon,
    )
