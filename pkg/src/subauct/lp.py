"""Exact linear programming over the rationals.

A two-phase primal simplex with Bland's rule, run on an all-integer
tableau (fraction-free "integer pivoting"): every row is stored scaled by
the current basis determinant ``d`` and each pivot divides exactly by the
previous ``d``.  This keeps the arithmetic in Python ints, which is far
faster than a Fraction tableau, while staying exact.

Problems have the form::

    maximize    c . x
    subject to  A_ub x <= b_ub,  A_eq x == b_eq,  x >= 0
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

__all__ = ["LPResult", "solve_lp", "find_feasible"]


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None


def _int_row(coeffs: Sequence[Fraction], rhs: Fraction) -> tuple[list[int], int]:
    L = math.lcm(rhs.denominator, *(q.denominator for q in coeffs)) if coeffs else rhs.denominator
    return [int(q * L) for q in coeffs], int(rhs * L)


class _Tableau:
    def __init__(self, rows: list[list[int]], basis: list[int], ncols: int):
        self.T = rows  # each row: ncols coefficients followed by rhs
        self.basis = basis
        self.ncols = ncols
        self.d = 1
        self.obj: list[int] = [0] * (ncols + 1)

    def pivot(self, r: int, c: int) -> None:
        T, d = self.T, self.d
        prow = T[r]
        p = prow[c]
        for i, row in enumerate(T):
            if i == r:
                continue
            f = row[c]
            if f == 0:
                T[i] = [x * p // d for x in row]
            else:
                T[i] = [(x * p - f * y) // d for x, y in zip(row, prow)]
        f = self.obj[c]
        if f == 0:
            self.obj = [x * p // d for x in self.obj]
        else:
            self.obj = [(x * p - f * y) // d for x, y in zip(self.obj, prow)]
        self.basis[r] = c
        self.d = p
        if p < 0:
            # drive-out pivots may be negative; keep the common scale positive
            self.T = [[-x for x in row] for row in self.T]
            self.obj = [-x for x in self.obj]
            self.d = -p

    def run(self, allowed: int) -> str:
        """Maximize the current objective row over columns < ``allowed``."""
        while True:
            obj = self.obj
            entering = next((j for j in range(allowed) if obj[j] < 0), None)
            if entering is None:
                return "optimal"
            best_r = None
            for i, row in enumerate(self.T):
                a = row[entering]
                if a <= 0:
                    continue
                if best_r is None:
                    best_r = i
                    continue
                # compare row[-1]/a with T[best_r][-1]/T[best_r][entering]
                b = self.T[best_r]
                lhs = row[-1] * b[entering]
                rhs = b[-1] * a
                if lhs < rhs or (lhs == rhs and self.basis[i] < self.basis[best_r]):
                    best_r = i
            if best_r is None:
                return "unbounded"
            self.pivot(best_r, entering)

    def set_objective(self, c_int: list[int]) -> None:
        """Install ``maximize c.x`` in canonical form for the current basis."""
        d = self.d
        obj = [-cj * d for cj in c_int] + [0] * (self.ncols - len(c_int)) + [0]
        for i, j in enumerate(self.basis):
            cb = c_int[j] if j < len(c_int) else 0
            if cb:
                row = self.T[i]
                obj = [o + cb * x for o, x in zip(obj, row)]
        # entries are stored scaled by d, so obj already is d * reduced costs
        self.obj = obj


def solve_lp(c, A_ub=(), b_ub=(), A_eq=(), b_eq=()) -> LPResult:
    """Solve the LP exactly.  All inputs are converted to Fractions."""
    n = len(c)
    c = [Fraction(x) for x in c]
    ub = [([Fraction(x) for x in row], Fraction(b)) for row, b in zip(A_ub, b_ub)]
    eq = [([Fraction(x) for x in row], Fraction(b)) for row, b in zip(A_eq, b_eq)]
    if len(ub) != len(A_ub) or len(eq) != len(A_eq):
        raise ValueError("constraint matrix and right-hand side lengths differ")
    for row, _ in ub + eq:
        if len(row) != n:
            raise ValueError(f"constraint row of length {len(row)} for {n} variables")

    n_slack = len(ub)
    needs_art = [b < 0 for _, b in ub] + [True] * len(eq)
    n_art = sum(needs_art)
    ncols = n + n_slack + n_art
    rows: list[list[int]] = []
    basis: list[int] = []
    art_col = n + n_slack
    for k, (coeffs, b) in enumerate(ub + eq):
        full = list(coeffs) + [Fraction(0)] * (n_slack + n_art)
        if k < n_slack:
            full[n + k] = Fraction(1)
        sign = -1 if b < 0 else 1
        full = [sign * q for q in full]
        b = sign * b
        ints, rhs = _int_row(full, b)
        if needs_art[k]:
            ints[art_col] = 1
            basis.append(art_col)
            art_col += 1
        else:
            # slack column was scaled with the row; rescale the slack variable instead
            ints[n + k] = 1
            basis.append(n + k)
        rows.append(ints + [rhs])

    tab = _Tableau(rows, basis, ncols)
    if n_art:
        art_start = n + n_slack
        obj = [0] * (ncols + 1)
        for i, j in enumerate(basis):
            if j >= art_start:
                obj = [o - x for o, x in zip(obj, rows[i])]
        for j in range(art_start, ncols):
            obj[j] = 0
        tab.obj = obj
        tab.run(ncols)
        if tab.obj[-1] < 0:
            return LPResult("infeasible")
        # drive remaining artificials out of the basis
        i = 0
        while i < len(tab.T):
            if tab.basis[i] >= art_start:
                row = tab.T[i]
                c_in = next((j for j in range(art_start) if row[j] != 0), None)
                if c_in is None:
                    del tab.T[i]
                    del tab.basis[i]
                    continue
                tab.pivot(i, c_in)
            i += 1
        tab.T = [row[:art_start] + [row[-1]] for row in tab.T]
        tab.ncols = art_start

    L = math.lcm(*(q.denominator for q in c)) if c else 1
    c_int = [int(q * L) for q in c]
    tab.set_objective(c_int)
    status = tab.run(n + n_slack)
    if status == "unbounded":
        return LPResult("unbounded")
    x = [Fraction(0)] * n
    for i, j in enumerate(tab.basis):
        if j < n:
            x[j] = Fraction(tab.T[i][-1], tab.d)
    value = sum((ci * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult("optimal", tuple(x), value)


def find_feasible(n: int, A_ub=(), b_ub=(), A_eq=(), b_eq=()) -> tuple[Fraction, ...] | None:
    """A point of ``{x >= 0 : A_ub x <= b_ub, A_eq x == b_eq}`` or None."""
    res = solve_lp([0] * n, A_ub, b_ub, A_eq, b_eq)
    return res.x if res.status == "optimal" else None
