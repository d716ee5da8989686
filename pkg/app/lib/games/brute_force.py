import logging
from dataclasses import dataclass
from typing import FrozenSet, Optional, Tuple

import numpy as np

from app.core.config import DEFAULT_ENUMERATION_CAP, DEFAULT_TOLERANCES, Tolerances
from app.core.errors import InstanceValidationError, UnsupportedInstanceError
from app.lib.games.equilibrium_net import (
    EquilibriumConcept, NetParams, check_equilibrium, enumerate_net, enumerate_profiles,
)
from app.lib.model import BayesianGame, objective_weights, posterior_game

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GridOptimum:
    value: float
    weights: Tuple[float, ...]
    posteriors: Tuple[Tuple[float, float], ...]


def brute_force_game_opt(game: BayesianGame, epsilon: float, delta: float,
                         concept: EquilibriumConcept = EquilibriumConcept.NE, grid: int = 50,
                         net_size: Optional[int] = None,
                         excluded_players: FrozenSet[int] = frozenset(),
                         cap: int = DEFAULT_ENUMERATION_CAP,
                         tol: Tolerances = DEFAULT_TOLERANCES) -> GridOptimum:
    """
    Best two-signal split of a two-state prior over grid posteriors (plus the
    prior itself), each posterior paired with its best net profile that is a
    `delta`-equilibrium there. A lower bound on the optimal value for tests.
    """
    if game.num_states != 2:
        raise UnsupportedInstanceError(
            f"grid oracle handles two-state games only, got {game.num_states} states")
    if grid < 1:
        raise UnsupportedInstanceError("grid must have at least one step")
    if any(not 0 <= i < game.num_players for i in excluded_players):
        raise InstanceValidationError("stackelberg leader is not a player index", field="stackelberg_leader")
    params = NetParams.resolve(net_size, game.num_players, game.num_actions, epsilon)
    profiles = enumerate_profiles(enumerate_net(game.num_actions, params.multiset_size, cap),
                                  game.num_players, cap)
    weights = [objective_weights(game, x) for x in profiles]

    lam = float(game.prior[0])
    points = sorted({k / grid for k in range(grid + 1)} | {lam})
    best = {}
    for a in points:
        mu = np.array([a, 1.0 - a])
        payoffs = posterior_game(game, mu).payoffs
        values = [float(w @ mu) for x, w in zip(profiles, weights)
                  if check_equilibrium(payoffs, x, delta, concept, excluded_players, tol).accepted]
        best[a] = max(values) if values else None

    optimum = GridOptimum(-np.inf, (), ())
    if best[lam] is not None:
        optimum = GridOptimum(best[lam], (1.0,), ((lam, 1.0 - lam),))
    for low in (a for a in points if a < lam and best[a] is not None):
        for high in (a for a in points if a > lam and best[a] is not None):
            alpha = (high - lam) / (high - low)
            value = alpha * best[low] + (1.0 - alpha) * best[high]
            if value > optimum.value:
                optimum = GridOptimum(value, (alpha, 1.0 - alpha),
                                      ((low, 1.0 - low), (high, 1.0 - high)))
    logger.info("grid oracle: %d posteriors, value %.6f", len(points), optimum.value)
    return optimum
