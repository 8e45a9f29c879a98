"""Dense two-phase simplex: agreement with vertex enumeration, edge cases."""

import itertools

import numpy as np

from okacert.lp import LPResult, feasible_point, solve_lp


def _brute_force_lp(c, A, b, maximize=False):
    """Optimal value over the vertices of {A x <= b} (bounded polytopes only).

    Enumerates all square subsystems, keeps feasible intersection points, and
    optimizes over them; valid because a bounded feasible LP attains its
    optimum at a vertex.
    """
    m, n = A.shape
    best = None
    for rows in itertools.combinations(range(m), n):
        sub = A[list(rows)]
        if abs(np.linalg.det(sub)) < 1e-10:
            continue
        x = np.linalg.solve(sub, b[list(rows)])
        if np.all(A @ x <= b + 1e-9):
            v = float(c @ x)
            if best is None or (v > best if maximize else v < best):
                best = v
    return best


def test_simplex_matches_vertex_enumeration():
    rng = np.random.default_rng(201)
    solved = 0
    for _ in range(120):
        n = int(rng.integers(2, 4))
        m = int(rng.integers(n + 1, n + 5))
        A = rng.normal(size=(m, n))
        # bounding box keeps the polytope compact
        A = np.vstack([A, np.eye(n), -np.eye(n)])
        b = np.concatenate([rng.uniform(0.2, 2.0, size=m), np.full(2 * n, 5.0)])
        c = rng.normal(size=n)
        res = solve_lp(c, A_ub=A, b_ub=b)
        ref = _brute_force_lp(c, A, b)
        assert res.optimal and ref is not None
        assert abs(res.value - ref) < 1e-7 * (1.0 + abs(ref))
        assert np.all(A @ res.x <= b + 1e-7)
        solved += 1
    assert solved == 120


def test_simplex_maximize_flag():
    A = np.array([[1.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])
    b = np.array([1.0, 0.0, 0.0])
    res = solve_lp(np.array([1.0, 2.0]), A_ub=A, b_ub=b, maximize=True)
    assert res.optimal
    assert abs(res.value - 2.0) < 1e-9
    assert np.allclose(res.x, [0.0, 1.0], atol=1e-9)


def test_simplex_unbounded():
    # min -x subject to x >= 0 (free to grow)
    res = solve_lp(np.array([-1.0]), A_ub=np.array([[-1.0]]), b_ub=np.array([0.0]))
    assert res.status == "unbounded"
    assert res.x is None


def test_simplex_infeasible():
    A = np.array([[1.0], [-1.0]])
    b = np.array([-1.0, -1.0])  # x <= -1 and x >= 1
    res = solve_lp(np.zeros(1), A_ub=A, b_ub=b)
    assert res.status == "infeasible"


def test_simplex_equality_constraints():
    # min x + y with x + y = 2, x, y >= 0
    res = solve_lp(
        np.array([1.0, 1.0]),
        A_ub=-np.eye(2), b_ub=np.zeros(2),
        A_eq=np.array([[1.0, 1.0]]), b_eq=np.array([2.0]),
    )
    assert res.optimal
    assert abs(res.value - 2.0) < 1e-9


def test_exact_mode_rational_value():
    # vertices at rational coordinates: exact mode returns exact optimum
    A = np.array([[3.0, 1.0], [1.0, 2.0], [-1.0, 0.0], [0.0, -1.0]])
    b = np.array([6.0, 4.0, 0.0, 0.0])
    res = solve_lp(np.array([-1.0, -1.0]), A_ub=A, b_ub=b, exact=True)
    assert res.optimal
    # optimum at (8/5, 6/5), value -(14/5)
    from fractions import Fraction
    assert res.value == Fraction(-14, 5)


def test_free_variables_both_signs():
    rng = np.random.default_rng(202)
    for _ in range(30):
        target = rng.normal(size=2) * 3
        # min c.x over the box [target - 1, target + 1]; optimum at a corner
        A = np.vstack([np.eye(2), -np.eye(2)])
        b = np.concatenate([target + 1.0, -(target - 1.0)])
        c = rng.normal(size=2)
        res = solve_lp(c, A_ub=A, b_ub=b)
        corner = target - np.sign(c)
        corner[c == 0] = target[c == 0] - 1.0
        assert res.optimal
        assert abs(res.value - c @ corner) < 1e-8


def test_feasible_point():
    A = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
    b = np.array([2.0, -1.0, 2.0, -1.0])  # box [1, 2]^2
    x = feasible_point(A_ub=A, b_ub=b)
    assert x is not None and np.all(A @ x <= b + 1e-9)
    none = feasible_point(A_ub=np.array([[1.0], [-1.0]]), b_ub=np.array([-1.0, -1.0]))
    assert none is None
