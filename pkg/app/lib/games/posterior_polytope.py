import logging
from dataclasses import dataclass
from typing import AbstractSet

import numpy as np

from app.core.config import DEFAULT_TOLERANCES, Tolerances
from app.lib.games.equilibrium_net import EquilibriumConcept
from app.lib.lp import check_feasible
from app.lib.model import BayesianGame, MixedProfile, deviation_payoffs

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PosteriorPolytope:
    """
    Beliefs mu on the simplex with a @ mu <= b: the posteriors under which
    `profile` is an `epsilon`-equilibrium of the given concept.

    Trivial rows (all-zero coefficients with b >= 0) are pruned; `row_count`
    is the number of rows before pruning.
    """
    a: np.ndarray
    b: np.ndarray
    profile: MixedProfile
    epsilon: float
    concept: EquilibriumConcept
    row_count: int
    known_empty: bool = False

    @property
    def num_states(self) -> int:
        return self.a.shape[1]

    def contains(self, mu: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
        mu = np.asarray(mu, dtype=float)
        if self.known_empty:
            return False
        if np.any(mu < -tol.feasibility_eps) or abs(mu.sum() - 1.0) > tol.feasibility_eps:
            return False
        return bool(np.all(self.a @ mu <= self.b + tol.feasibility_eps))

    def homogenized(self) -> np.ndarray:
        """Rows of a - b 1^T, so that gamma / sum(gamma) lies in the polytope iff rows @ gamma <= 0."""
        return self.a - self.b[:, None]


def build_polytope(game: BayesianGame, profile: MixedProfile, epsilon: float,
                   concept: EquilibriumConcept = EquilibriumConcept.NE,
                   excluded_players: AbstractSet[int] = frozenset(),
                   tol: Tolerances = DEFAULT_TOLERANCES) -> PosteriorPolytope:
    rows = []
    for i, x in enumerate(profile.strategies):
        if i in excluded_players:
            continue
        # deviations[theta, j] = A_i^theta(j, x_-i)
        deviations = deviation_payoffs(game.payoffs[i], profile, i, lead=1)
        if concept is EquilibriumConcept.NE:
            current = deviations @ x
            rows.extend(deviations[:, j] - current for j in range(deviations.shape[1]))
        else:
            for j in np.flatnonzero(x > tol.drop_eps):
                rows.extend(deviations[:, alt] - deviations[:, j] for alt in range(deviations.shape[1]))

    a = np.array(rows).reshape(len(rows), game.num_states)
    b = np.full(len(rows), float(epsilon))
    trivial = np.all(np.abs(a) <= tol.drop_eps, axis=1)
    known_empty = bool(np.any(trivial & (b < 0)))
    return PosteriorPolytope(
        a=a[~trivial], b=b[~trivial], profile=profile, epsilon=epsilon,
        concept=concept, row_count=len(rows), known_empty=known_empty,
    )


def polytope_nonempty(polytope: PosteriorPolytope, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    if polytope.known_empty:
        return False
    if polytope.a.shape[0] == 0:
        return True
    simplex = np.ones((1, polytope.num_states))
    return check_feasible(polytope.a, polytope.b, simplex, [1.0], tol)
