from fractions import Fraction

import numpy as np
import pytest

from app.core.errors import InternalSolverError, LpInputError
from app.lib.lp import LinearProgram, LpStatus, check_feasible, simplex, solve_lp
from app.lib.lp.exact import solve_lp_exact


def test_bounded_maximum():
    result = solve_lp(LinearProgram.build([1.0], a_ub=[[1.0]], b_ub=[1.0]))
    assert result.status is LpStatus.OPTIMAL
    assert result.x[0] == pytest.approx(1.0)
    assert result.value == pytest.approx(1.0)


def test_infeasible():
    result = solve_lp(LinearProgram.build([1.0], a_ub=[[1.0]], b_ub=[-1.0]))
    assert result.status is LpStatus.INFEASIBLE
    assert result.x is None


def test_unbounded():
    assert solve_lp(LinearProgram.build([1.0])).status is LpStatus.UNBOUNDED


def test_equality_rows_and_negative_rhs():
    # maximize x1 s.t. x1 + x2 = 1, -x1 <= -0.25
    result = solve_lp(LinearProgram.build([1.0, 0.0], a_ub=[[-1.0, 0.0]], b_ub=[-0.25],
                                          a_eq=[[1.0, 1.0]], b_eq=[1.0]))
    assert result.is_optimal
    np.testing.assert_allclose(result.x, [1.0, 0.0], atol=1e-12)


def test_redundant_equality_rows():
    result = solve_lp(LinearProgram.build([1.0, 2.0], a_eq=[[1.0, 1.0], [2.0, 2.0]], b_eq=[1.0, 2.0]))
    assert result.is_optimal
    assert result.value == pytest.approx(2.0)


def test_dual_certificate():
    result = solve_lp(LinearProgram.build([1.0, 1.0], a_ub=[[1, 0], [0, 1], [1, 1]], b_ub=[1, 2, 4]))
    assert result.value == pytest.approx(3.0)
    np.testing.assert_allclose(result.dual_ub, [1.0, 1.0, 0.0], atol=1e-9)
    assert result.dual_ub @ np.array([1, 2, 4]) == pytest.approx(result.value)


def test_rejects_mismatched_shapes():
    with pytest.raises(LpInputError):
        solve_lp(LinearProgram.build([1.0, 1.0], a_ub=[[1.0]], b_ub=[1.0]))
    with pytest.raises(LpInputError):
        solve_lp(LinearProgram.build([1.0], a_ub=[[1.0]], b_ub=[1.0, 2.0]))


def test_feasibility_of_halfspace_on_simplex():
    assert check_feasible([[-1.0, 0.0]], [-0.5], [[1.0, 1.0]], [1.0])


def test_infeasibility_of_disjoint_halfspaces():
    assert not check_feasible([[-1.0, 0.0], [1.0, 0.0]], [-0.6, 0.4], [[1.0, 1.0]], [1.0])


def test_full_simplex_is_feasible():
    assert check_feasible(a_eq=np.ones((1, 4)), b_eq=[1.0])


def test_exact_oracle_small_cases():
    assert solve_lp_exact([1], [[1]], [1]).value == 1
    assert solve_lp_exact([1], [[1]], [-1]).status is LpStatus.INFEASIBLE
    assert solve_lp_exact([1], [[-1]], [0]).status is LpStatus.UNBOUNDED


def _random_rational_lp(rng):
    """Entries are small fractions with denominators up to 3."""
    n = int(rng.integers(1, 9))
    p = int(rng.integers(0, 9))
    q = int(rng.integers(0, 9 - p)) if p < 8 else 0

    def draw(shape, low, high):
        num = rng.integers(low, high, size=shape)
        den = rng.integers(1, 4, size=shape)
        out = np.empty(num.shape, dtype=object)
        for idx in np.ndindex(num.shape):
            out[idx] = Fraction(int(num[idx]), int(den[idx]))
        return out

    return draw(n, -6, 7), draw((p, n), -6, 7), draw(p, -3, 10), draw((q, n), -6, 7), draw(q, 0, 7)


def _floats(values):
    return np.asarray(values, dtype=float)


def test_matches_exact_oracle_on_random_lps():
    rng = np.random.default_rng(7)
    for trial in range(1000):
        c, a_ub, b_ub, a_eq, b_eq = _random_rational_lp(rng)
        exact = solve_lp_exact(c.tolist(), a_ub.tolist(), b_ub.tolist(), a_eq.tolist(), b_eq.tolist())
        result = solve_lp(LinearProgram.build(_floats(c), _floats(a_ub), _floats(b_ub),
                                              _floats(a_eq), _floats(b_eq)))
        assert result.status is exact.status, f"trial {trial}"
        if exact.status is not LpStatus.OPTIMAL:
            continue
        assert result.value == pytest.approx(float(exact.value), abs=1e-7)
        assert result.max_violation <= 1e-7

        # dual of max c.x: min b.y with y_ub >= 0 and A^T y >= c
        assert np.all(result.dual_ub >= -1e-7), f"trial {trial}"
        reduced = _floats(a_ub).T @ result.dual_ub + _floats(a_eq).T @ result.dual_eq - _floats(c)
        assert np.all(reduced >= -1e-6), f"trial {trial}"
        dual_value = _floats(b_ub) @ result.dual_ub + _floats(b_eq) @ result.dual_eq
        assert abs(dual_value - result.value) <= 1e-6, f"trial {trial}"


def test_violated_optimal_basis_raises(monkeypatch):
    run_simplex = simplex._run_simplex

    def drifting(tableau, basis, cost, eps):
        status = run_simplex(tableau, basis, cost, eps)
        tableau[:, -1] += 1.0
        return status

    monkeypatch.setattr(simplex, "_run_simplex", drifting)
    with pytest.raises(InternalSolverError, match="violates"):
        solve_lp(LinearProgram.build([1.0], a_ub=[[1.0]], b_ub=[1.0]))
