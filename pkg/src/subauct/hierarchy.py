"""Membership tests for the complement-free hierarchy.

Every checker enumerates bundles in canonical mask order and returns a
:class:`Check`, which is truthy iff the property holds.  On failure the
check carries the first violating configuration in that order.

Gross substitutes is decided through the finite exchange property of
M-natural concave set functions (Fujishige and Yang; the exchange form
follows Murota's formulation):

    for all S, T and x in S - T:
        v(S) + v(T) <= max( v(S - x) + v(T + x),
                            max over y in T - S of v(S - x + y) + v(T + x - y) )

The price-quantified definition cannot be checked finitely.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, NamedTuple

from .core import (
    ItemSet,
    PriceVector,
    SymmetricValuation,
    TableValuation,
    Valuation,
    as_mask,
    bits,
    check_enumerable,
    popcount,
    submasks,
    to_money,
)
from .errors import (
    NotSymmetric,
    PerturbationTooLarge,
    UnboundedComplementarity,
    UniverseMismatch,
    UniverseTooLarge,
    UniverseTooSmall,
)
from .lp import solve_lp

XOS_MAX_ITEMS = 10


@dataclass(frozen=True)
class Check:
    holds: bool
    witness: Any = None

    def __bool__(self) -> bool:
        return self.holds


class SubmodularityWitness(NamedTuple):
    """v(x | S) < v(x | S + y)."""

    x: int
    y: int
    S: ItemSet

    @property
    def sets(self) -> tuple[ItemSet, ItemSet]:
        """The pair A = S+x, B = S+y violating v(A)+v(B) >= v(A|B)+v(A&B)."""
        return self.S.add(self.x), self.S.add(self.y)


class ExchangeWitness(NamedTuple):
    S: ItemSet
    T: ItemSet
    x: int


class ComplementarityWitness(NamedTuple):
    """a * v(x | S) < v(x | T) with S inside T."""

    x: int
    S: ItemSet
    T: ItemSet


def _table(v: Valuation) -> list[int]:
    check_enumerable(v.m, "class membership test")
    return v.int_table()[0]


def is_complement_free(v: Valuation) -> Check:
    """v(A) + v(B) >= v(A | B) for all A, B.

    Only disjoint pairs are enumerated: under monotonicity
    v(A) + v(B) >= v(A - B) + v(B), so the disjoint case implies the rest.
    Witness: the pair (A, B).
    """
    t = _table(v)
    m, full = v.m, v.full_mask
    for A in range(1, full + 1):
        tA = t[A]
        for B in submasks(full & ~A):
            if B > A and tA + t[B] < t[A | B]:
                return Check(False, (ItemSet(m, A), ItemSet(m, B)))
    return Check(True)


def is_submodular(v: Valuation) -> Check:
    """v(x | S) >= v(x | S + y) for all items x != y and bundles S."""
    t = _table(v)
    m = v.m
    for S in range(1 << m):
        free = [i for i in range(m) if not S >> i & 1]
        for x in free:
            bx = 1 << x
            gain = t[S | bx] - t[S]
            for y in free:
                if y == x:
                    continue
                by = 1 << y
                if t[S | bx | by] - t[S | by] > gain:
                    return Check(False, SubmodularityWitness(x, y, ItemSet(m, S)))
    return Check(True)


def is_gross_substitutes(v: Valuation) -> Check:
    """Gross substitutes via the exchange property (see module docstring)."""
    t = _table(v)
    m = v.m
    n = 1 << m
    members = [list(bits(mask)) for mask in range(n)]
    for S in range(n):
        tS = t[S]
        for T in range(n):
            only_s = S & ~T
            if not only_s:
                continue
            lhs = tS + t[T]
            only_t = members[T & ~S]
            for x in members[only_s]:
                bx = 1 << x
                S_x, T_x = S & ~bx, T | bx
                if t[S_x] + t[T_x] >= lhs:
                    continue
                if any(t[S_x | 1 << y] + t[T_x & ~(1 << y)] >= lhs for y in only_t):
                    continue
                return Check(False, ExchangeWitness(ItemSet(m, S), ItemSet(m, T), x))
    return Check(True)


def single_improvement_step(v: Valuation, p: PriceVector, A: ItemSet) -> ItemSet | None:
    """Best bundle reachable from A by dropping and adding at most one item each.

    Returns None when no such neighbour has strictly larger surplus.  Ties
    go to the first neighbour in canonical order.
    """
    if A.m != v.m or p.m != v.m:
        raise UniverseMismatch("valuation, prices and bundle must share the universe")
    m = v.m
    inside = [None] + list(bits(A.mask))
    outside = [None] + [i for i in range(m) if not A.mask >> i & 1]
    base = v.value(A.mask) - p.total(A.mask)
    best_val, best = base, None
    candidates = set()
    for drop in inside:
        for add in outside:
            mask = A.mask
            if drop is not None:
                mask &= ~(1 << drop)
            if add is not None:
                mask |= 1 << add
            if mask != A.mask:
                candidates.add(mask)
    for mask in sorted(candidates):
        s = v.value(mask) - p.total(mask)
        if s > best_val:
            best_val, best = s, mask
    return None if best is None else ItemSet(m, best)


class PriceWitness(NamedTuple):
    """At ``prices`` bundle A is beaten by D, yet no single swap improves A."""

    prices: PriceVector
    A: ItemSet
    D: ItemSet


def _neighbours(A: int, m: int) -> set[int]:
    inside = [None] + list(bits(A))
    outside = [None] + [i for i in range(m) if not A >> i & 1]
    out = set()
    for drop in inside:
        for add in outside:
            mask = A
            if drop is not None:
                mask &= ~(1 << drop)
            if add is not None:
                mask |= 1 << add
            if mask != A:
                out.add(mask)
    return out


def single_improvement_witness(v: Valuation, max_items: int = 6) -> PriceWitness | None:
    """Prices violating the single improvement property, or None if there are none.

    For every pair (A, D) with D not one swap away from A, an exact LP looks
    for nonnegative prices making D strictly better than A while no
    neighbour of A beats A.  Pairs are tried in canonical order.
    """
    if v.m > max_items:
        raise UniverseTooLarge(f"price witness search limited to m <= {max_items}")
    t, L = v.int_table()
    m = v.m

    def price_row(plus: int, minus: int) -> list[int]:
        return [(plus >> i & 1) - (minus >> i & 1) for i in range(m)]

    for A in range(1 << m):
        near = _neighbours(A, m)
        rows = [price_row(A, N) + [0] for N in sorted(near)]
        rhs = [t[A] - t[N] for N in sorted(near)]
        for D in range(1 << m):
            if D == A or D in near:
                continue
            res = solve_lp([0] * m + [1], rows + [price_row(D, A) + [1], [0] * m + [1]],
                           rhs + [t[D] - t[A], 1])
            if res.status == "optimal" and res.value > 0:
                prices = PriceVector(x / L for x in res.x[:m])
                return PriceWitness(prices, ItemSet(m, A), ItemSet(m, D))
    return None


def xos_supporting_prices(v: Valuation, A: ItemSet) -> tuple[Fraction, ...] | None:
    """Nonnegative item prices summing to v(A) on A, with no S inside A overpriced.

    Returns a length-m tuple (zero outside A) or None if none exist.
    """
    if A.m != v.m:
        raise UniverseMismatch("bundle and valuation universes differ")
    t, L = v.int_table()
    items = list(bits(A.mask))
    if not items:
        return (Fraction(0),) * v.m
    k = len(items)
    rows, rhs = [], []
    for S in submasks(A.mask):
        if S:
            rows.append([1 if S >> i & 1 else 0 for i in items])
            rhs.append(t[S])
    res = solve_lp([1] * k, rows, rhs)
    if res.value != t[A.mask]:
        return None
    prices = [Fraction(0)] * v.m
    for i, x in zip(items, res.x):
        prices[i] = x / L
    return tuple(prices)


def _xos_support_exists(t: list[int], A: int) -> bool:
    items = list(bits(A))
    k = len(items)
    # quick reject: splitting A in two already beats v(A)
    for B in submasks(A):
        if t[B] + t[A & ~B] < t[A]:
            return False
    # quick accept: marginal prices along increasing item order
    held, prices = 0, {}
    for i in items:
        prices[i] = t[held | 1 << i] - t[held]
        held |= 1 << i
    if all(sum(prices[i] for i in bits(S)) <= t[S] for S in submasks(A)):
        return True
    # exact decision on the fractional-cover dual:
    #   min sum_S y_S v(S)  s.t.  sum_{S ∋ i} y_S >= 1 (i in A), y >= 0
    # has optimum v(A) iff supporting prices exist.
    subsets = [S for S in submasks(A) if S]
    A_ub = [[-1 if S >> i & 1 else 0 for S in subsets] for i in items]
    res = solve_lp([-t[S] for S in subsets], A_ub, [-1] * k)
    return -res.value >= t[A]


def is_xos(v: Valuation) -> Check:
    """v is a maximum of additive valuations (equivalently: every bundle A
    admits supporting prices).  Witness: the first bundle without them."""
    if v.m > XOS_MAX_ITEMS:
        raise UniverseTooLarge(f"XOS test limited to m <= {XOS_MAX_ITEMS}")
    t = _table(v)
    for A in range(1, 1 << v.m):
        if not _xos_support_exists(t, A):
            return Check(False, ItemSet(v.m, A))
    return Check(True)


def is_downward_sloping(v: Valuation) -> bool:
    """Non-increasing marginal sequence of a symmetric valuation."""
    if not isinstance(v, SymmetricValuation):
        raise NotSymmetric(f"{v.kind} valuation is not symmetric")
    p = v.marginals
    return all(p[i + 1] <= p[i] for i in range(len(p) - 1))


def min_complementarity(v: Valuation) -> Fraction:
    """Smallest a >= 1 such that a * v(x|S) >= v(x|T) whenever S is inside T, x not in T.

    Raises UnboundedComplementarity when some v(x|S) = 0 < v(x|T).
    """
    t = _table(v)
    m = v.m
    best = Fraction(1)
    for x in range(m):
        bx = 1 << x
        rest = v.full_mask & ~bx
        for T in submasks(rest):
            num = t[T | bx] - t[T]
            if num <= 0:
                continue
            for S in submasks(T):
                den = t[S | bx] - t[S]
                if den == 0:
                    raise UnboundedComplementarity(ComplementarityWitness(x, ItemSet(m, S), ItemSet(m, T)))
                if num > best * den:
                    best = Fraction(num, den)
    return best


def is_a_submodular(v: Valuation, a) -> Check:
    a = to_money(a)
    if a < 1:
        raise ValueError("a must be at least 1")
    t = _table(v)
    m = v.m
    for x in range(m):
        bx = 1 << x
        for T in submasks(v.full_mask & ~bx):
            num = t[T | bx] - t[T]
            if num <= 0:
                continue
            for S in submasks(T):
                if a * (t[S | bx] - t[S]) < num:
                    return Check(False, ComplementarityWitness(x, ItemSet(m, S), ItemSet(m, T)))
    return Check(True)


def gs_triple_property(v: Valuation) -> Check:
    """For distinct x, y, z: v(z|y) < v(z|x) implies v(x|y) = v(x|z).

    Every gross-substitutes valuation satisfies it.  Witness: (x, y, z).
    """
    if v.m < 3:
        raise UniverseTooSmall("the triple property needs at least three items")
    check_enumerable(v.m)

    def mv(a, b):
        return v.value(1 << a | 1 << b) - v.value(1 << b)

    for x, y, z in itertools.permutations(range(v.m), 3):
        if mv(z, y) < mv(z, x) and mv(x, y) != mv(x, z):
            return Check(False, (x, y, z))
    return Check(True)


def perturbed_central(m: int, h: Mapping | None = None) -> TableValuation:
    """v(S) = 1 - 2^-|S| + h(S) with |h(S)| <= 2^-(m+2) and h(empty) = 0.

    ``h`` maps bundles (ItemSet, or iterables of items) to rationals;
    missing bundles get 0.
    """
    check_enumerable(m, "perturbed central valuation")
    bound = Fraction(1, 2 ** (m + 2))
    offsets = [Fraction(0)] * (1 << m)
    for key, val in (h or {}).items():
        mask = as_mask(key, m) if not isinstance(key, int) else key
        if not 0 <= mask < 1 << m:
            raise ValueError(f"bundle {key!r} outside universe")
        q = to_money(val, signed=True)
        if abs(q) > bound:
            raise PerturbationTooLarge(f"|h({key})| = {abs(q)} exceeds 2^-{m + 2}")
        if mask == 0 and q != 0:
            raise PerturbationTooLarge("h(empty set) must be 0")
        offsets[mask] = q
    return TableValuation(m, [1 - Fraction(1, 2 ** popcount(mask)) + offsets[mask] for mask in range(1 << m)])


@dataclass
class ClassReport:
    verdicts: dict[str, bool]
    witnesses: dict[str, Any] = field(default_factory=dict)
    minimal_a: Fraction | None = None  # None when complementarity is unbounded

    def consistent(self) -> bool:
        """GS => SM => XOS => CF, and SM iff minimal_a == 1."""
        v = self.verdicts
        chain = (not v["GS"] or v["SM"]) and (not v["SM"] or v["XOS"]) and (not v["XOS"] or v["CF"])
        return chain and (v["SM"] == (self.minimal_a == 1))


def classify(v: Valuation) -> ClassReport:
    checks = {
        "CF": is_complement_free(v),
        "SM": is_submodular(v),
        "GS": is_gross_substitutes(v),
        "XOS": is_xos(v),
    }
    verdicts = {k: c.holds for k, c in checks.items()}
    witnesses = {k: c.witness for k, c in checks.items() if not c.holds}
    if not verdicts["GS"] and v.m <= 6:
        witnesses["GS_prices"] = single_improvement_witness(v)
    if isinstance(v, SymmetricValuation):
        verdicts["downward_sloping"] = is_downward_sloping(v)
    try:
        a = min_complementarity(v)
    except UnboundedComplementarity as exc:
        a = None
        witnesses["minimal_a"] = exc.witness
    return ClassReport(verdicts, witnesses, a)
