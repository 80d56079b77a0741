"""Exact simplex against hand-solved problems and a floating-point reference."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from subauct.lp import find_feasible, solve_lp


def test_textbook_maximum():
    res = solve_lp([1, 1], [[1, 2], [3, 1]], [4, 6])
    assert res.status == "optimal"
    assert res.x == (Fraction(8, 5), Fraction(6, 5))
    assert res.value == Fraction(14, 5)


def test_equality_constraint():
    res = solve_lp([1, 2], A_eq=[[1, 1]], b_eq=[3], A_ub=[[0, 1]], b_ub=[2])
    assert res.value == 5 and res.x == (1, 2)


def test_infeasible():
    assert solve_lp([0, 0], [[1, -1], [-1, 1]], [8, -9]).status == "infeasible"
    assert find_feasible(2, [[1, -1], [-1, 1]], [8, -9]) is None


def test_unbounded():
    assert solve_lp([1, 0], [[-1, 1]], [1]).status == "unbounded"


def test_degenerate_artificial_drive_out():
    # phase one ends with an artificial basic at zero; removing it pivots on a negative entry
    rows = [[-1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [1, 1, 0, 1], [0, 0, 0, 1]]
    res = solve_lp([0, 0, 0, 1], rows, [-1, -2, -3, 3, 1])
    assert res.status == "optimal"
    assert res.value == 0
    assert res.x[:3] == (1, 2, 3)


def test_rational_data():
    res = solve_lp(["1/2", "1/3"], [["1/2", 1]], ["3/4"])
    assert res.value == Fraction(3, 4)


def test_mismatched_lengths():
    with pytest.raises(ValueError):
        solve_lp([1, 1], [[1]], [1])


def _feasible(A_ub, b_ub, x) -> bool:
    return all(sum(Fraction(a) * xi for a, xi in zip(row, x)) <= b for row, b in zip(A_ub, b_ub))


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_agrees_with_reference_solver(data):
    n = data.draw(st.integers(1, 4))
    k = data.draw(st.integers(1, 5))
    ints = st.integers(-4, 4)
    A = [[data.draw(ints) for _ in range(n)] for _ in range(k)]
    b = [data.draw(st.integers(-6, 10)) for _ in range(k)]
    c = [data.draw(ints) for _ in range(n)]
    # keep the region bounded
    A_all = A + [[1 if j == i else 0 for j in range(n)] for i in range(n)]
    b_all = b + [10] * n
    mine = solve_lp(c, A_all, b_all)
    ref = linprog(-np.array(c, dtype=float), A_ub=np.array(A_all, dtype=float), b_ub=np.array(b_all, dtype=float),
                  bounds=[(0, None)] * n, method="highs")
    if ref.status == 2:
        assert mine.status == "infeasible"
        return
    assert ref.status == 0
    assert mine.status == "optimal"
    assert abs(float(mine.value) + ref.fun) < 1e-7
    assert _feasible(A_all, b_all, mine.x) and all(xi >= 0 for xi in mine.x)


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_equality_systems_against_reference(data):
    n = data.draw(st.integers(2, 4))
    A_eq = [[data.draw(st.integers(-3, 3)) for _ in range(n)]]
    b_eq = [data.draw(st.integers(-5, 5))]
    c = [data.draw(st.integers(-3, 3)) for _ in range(n)]
    A_ub = [[1] * n]
    b_ub = [8]
    mine = solve_lp(c, A_ub, b_ub, A_eq, b_eq)
    ref = linprog(-np.array(c, dtype=float), A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                  bounds=[(0, None)] * n, method="highs")
    if ref.status == 2:
        assert mine.status == "infeasible"
        return
    assert mine.status == "optimal"
    assert abs(float(mine.value) + ref.fun) < 1e-7
    assert sum(Fraction(a) * x for a, x in zip(A_eq[0], mine.x)) == b_eq[0]


def test_larger_random_systems_against_reference():
    rng = np.random.default_rng(7)
    for _ in range(300):
        n, k = rng.integers(2, 9), rng.integers(2, 13)
        A = rng.integers(-5, 6, size=(k, n))
        b = rng.integers(-8, 15, size=k)
        c = rng.integers(-5, 6, size=n)
        A_all = np.vstack([A, np.eye(n, dtype=int)])
        b_all = np.concatenate([b, np.full(n, 12)])
        eq = rng.random() < 0.3
        A_eq = rng.integers(-3, 4, size=(1, n)) if eq else None
        b_eq = rng.integers(-4, 5, size=1) if eq else None
        mine = solve_lp(c.tolist(), A_all.tolist(), b_all.tolist(),
                        A_eq.tolist() if eq else (), b_eq.tolist() if eq else ())
        ref = linprog(-c, A_ub=A_all, b_ub=b_all, A_eq=A_eq, b_eq=b_eq, bounds=[(0, None)] * n, method="highs")
        if ref.status == 2:
            assert mine.status == "infeasible"
        else:
            assert mine.status == "optimal"
            assert abs(float(mine.value) + ref.fun) < 1e-6
            assert _feasible(A_all.tolist(), b_all.tolist(), mine.x)
