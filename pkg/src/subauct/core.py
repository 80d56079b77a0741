"""Item sets, exact money, valuation constructors, marginals and demand.

Items are the integers ``0 .. m-1`` and a bundle is stored as a bitmask
(bit ``i`` set iff item ``i`` is in the bundle).  Every enumeration over
bundles runs in increasing mask order, which is the canonical order used
for tie-breaking and for reporting witnesses throughout the package.

All money is :class:`fractions.Fraction`; floats are rejected on input.
"""

from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence

from .errors import (
    MonotonicityViolation,
    NegativeValue,
    NormalizationViolation,
    UniverseMismatch,
    UniverseTooLarge,
    ValuationError,
)

Money = Fraction

DEFAULT_MAX_UNIVERSE = 20
HARD_MAX_UNIVERSE = 24


def max_universe() -> int:
    """Largest m for which 2^m enumeration is allowed.

    ``SUBAUCT_MAX_UNIVERSE`` overrides the default of 20, clamped to 24.
    """
    raw = os.environ.get("SUBAUCT_MAX_UNIVERSE")
    if not raw:
        return DEFAULT_MAX_UNIVERSE
    try:
        cap = int(raw)
    except ValueError:
        return DEFAULT_MAX_UNIVERSE
    return max(1, min(cap, HARD_MAX_UNIVERSE))


def check_enumerable(m: int, what: str = "enumeration", limit: int | None = None) -> None:
    cap = max_universe() if limit is None else min(limit, max_universe())
    if m > cap:
        raise UniverseTooLarge(f"{what} needs 2^{m} subsets; universe cap is m <= {cap}")


def to_money(x, *, signed: bool = False) -> Fraction:
    """Convert ``x`` to an exact rational.

    Accepts ints, Fractions, Decimals and strings such as ``"7/2"`` or
    ``"3.25"``.  Floats are refused because they are not exact.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not money")
    if isinstance(x, float):
        raise TypeError(f"float {x!r} is not exact; pass an int, Fraction or 'p/q' string")
    if isinstance(x, (int, Fraction)):
        q = Fraction(x)
    elif isinstance(x, Decimal):
        q = Fraction(x)
    elif isinstance(x, str):
        try:
            q = Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational number: {x!r}") from exc
    else:
        raise TypeError(f"cannot interpret {type(x).__name__} as money")
    if not signed and q < 0:
        raise NegativeValue(f"negative amount {q}")
    return q


def format_money(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# bitmask helpers


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask`` in increasing order."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` in increasing numeric order, 0 and mask included."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def mask_of(items: Iterable[int], m: int) -> int:
    mask = 0
    for i in items:
        if not isinstance(i, int) or isinstance(i, bool) or not 0 <= i < m:
            raise ValueError(f"item {i!r} outside universe 0..{m - 1}")
        mask |= 1 << i
    return mask


@dataclass(frozen=True)
class ItemSet:
    """A bundle of items over the universe ``{0, ..., m-1}``."""

    m: int
    mask: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("universe must contain at least one item")
        if self.mask < 0 or self.mask >> self.m:
            raise ValueError(f"mask {self.mask:#b} has bits outside a universe of {self.m} items")

    @classmethod
    def of(cls, m: int, items: Iterable[int] = ()) -> "ItemSet":
        return cls(m, mask_of(items, m))

    @classmethod
    def full(cls, m: int) -> "ItemSet":
        return cls(m, (1 << m) - 1)

    @classmethod
    def empty(cls, m: int) -> "ItemSet":
        return cls(m, 0)

    def __iter__(self) -> Iterator[int]:
        return bits(self.mask)

    def __len__(self) -> int:
        return popcount(self.mask)

    def __contains__(self, item) -> bool:
        return isinstance(item, int) and 0 <= item < self.m and bool(self.mask >> item & 1)

    def _same(self, other: "ItemSet") -> None:
        if not isinstance(other, ItemSet):
            raise TypeError("expected an ItemSet")
        if other.m != self.m:
            raise UniverseMismatch(f"universes of size {self.m} and {other.m}")

    def __or__(self, other: "ItemSet") -> "ItemSet":
        self._same(other)
        return ItemSet(self.m, self.mask | other.mask)

    def __and__(self, other: "ItemSet") -> "ItemSet":
        self._same(other)
        return ItemSet(self.m, self.mask & other.mask)

    def __sub__(self, other: "ItemSet") -> "ItemSet":
        self._same(other)
        return ItemSet(self.m, self.mask & ~other.mask)

    def __le__(self, other: "ItemSet") -> bool:
        self._same(other)
        return self.mask & ~other.mask == 0

    def complement(self) -> "ItemSet":
        return ItemSet(self.m, ((1 << self.m) - 1) & ~self.mask)

    def add(self, item: int) -> "ItemSet":
        return ItemSet(self.m, self.mask | mask_of([item], self.m))

    def remove(self, item: int) -> "ItemSet":
        return ItemSet(self.m, self.mask & ~mask_of([item], self.m))

    def items(self) -> tuple[int, ...]:
        return tuple(self)

    def __repr__(self) -> str:
        return "{" + ", ".join(map(str, self)) + "}"


def all_subsets(m: int) -> Iterator[ItemSet]:
    """Every bundle over ``m`` items in canonical (mask) order."""
    check_enumerable(m)
    for mask in range(1 << m):
        yield ItemSet(m, mask)


def as_mask(S, m: int) -> int:
    """Accept an ItemSet or an iterable of item indices and return a mask."""
    if isinstance(S, ItemSet):
        if S.m != m:
            raise UniverseMismatch(f"set over {S.m} items given to a valuation over {m}")
        return S.mask
    if isinstance(S, int):
        raise TypeError("pass an ItemSet or an iterable of items, not a bare int")
    return mask_of(S, m)


@dataclass(frozen=True)
class PriceVector:
    """Nonnegative exact per-item prices."""

    prices: tuple[Fraction, ...]

    def __init__(self, prices: Iterable):
        object.__setattr__(self, "prices", tuple(to_money(p) for p in prices))
        if not self.prices:
            raise ValueError("price vector must be nonempty")

    @classmethod
    def zeros(cls, m: int) -> "PriceVector":
        return cls([0] * m)

    @property
    def m(self) -> int:
        return len(self.prices)

    def __len__(self) -> int:
        return len(self.prices)

    def __getitem__(self, i: int) -> Fraction:
        return self.prices[i]

    def __iter__(self):
        return iter(self.prices)

    def total(self, mask: int) -> Fraction:
        return sum((self.prices[i] for i in bits(mask)), Fraction(0))

    def __repr__(self) -> str:
        return "PriceVector(" + ", ".join(format_money(p) for p in self.prices) + ")"


# ---------------------------------------------------------------------------
# valuations


class Valuation:
    """A monotone, normalized set function with exact rational values.

    Subclasses implement :meth:`_value` on bitmasks.  Instances are
    immutable; the full value table is materialized lazily and cached.
    """

    kind: str = "abstract"

    def __init__(self, m: int):
        if m < 1:
            raise ValueError("a valuation needs at least one item")
        self.m = m
        self._table: tuple[Fraction, ...] | None = None
        self._lock = threading.Lock()

    def _value(self, mask: int) -> Fraction:
        raise NotImplementedError

    def value(self, mask: int) -> Fraction:
        """Value of the bundle encoded by ``mask``."""
        table = self._table
        if table is not None:
            return table[mask]
        return self._value(mask)

    def __call__(self, S) -> Fraction:
        return self.value(as_mask(S, self.m))

    def table(self) -> tuple[Fraction, ...]:
        """All 2^m values in mask order."""
        if self._table is None:
            check_enumerable(self.m, f"value table of a {self.kind} valuation")
            with self._lock:
                if self._table is None:
                    self._table = tuple(self._value(mask) for mask in range(1 << self.m))
        return self._table

    @property
    def full_mask(self) -> int:
        return (1 << self.m) - 1

    def int_table(self) -> tuple[list[int], int]:
        """Value table scaled to integers: ``(ints, L)`` with value = int / L."""
        cached = getattr(self, "_int_cache", None)
        if cached is None:
            table = self.table()
            L = math.lcm(*(q.denominator for q in table))
            cached = ([q.numerator * (L // q.denominator) for q in table], L)
            self._int_cache = cached
        return cached

    def marginal_value(self, item: int, given: int) -> Fraction:
        """v(item | given) on masks."""
        bit = 1 << item
        if given & bit:
            return Fraction(0)
        return self.value(given | bit) - self.value(given)

    def params(self) -> dict:
        """Kind-specific parameters (used for reporting and serialization)."""
        return {}

    def __repr__(self) -> str:
        return f"<{type(self).__name__} kind={self.kind} m={self.m}>"


def _money_list(values: Iterable, what: str) -> tuple[Fraction, ...]:
    try:
        return tuple(to_money(v) for v in values)
    except NegativeValue as exc:
        raise NegativeValue(f"negative {what}: {exc}") from None


class TableValuation(Valuation):
    """Explicit table of all 2^m values; invariants checked exhaustively."""

    kind = "table"

    def __init__(self, m: int, values: Sequence):
        super().__init__(m)
        check_enumerable(m, "table valuation")
        if len(values) != 1 << m:
            raise ValuationError(f"table needs {1 << m} values, got {len(values)}")
        vals = _money_list(values, "table value")
        if vals[0] != 0:
            raise NormalizationViolation(f"v(empty set) = {vals[0]}, must be 0")
        for mask in range(1 << m):
            for i in range(m):
                bigger = mask | (1 << i)
                if bigger != mask and vals[mask] > vals[bigger]:
                    raise MonotonicityViolation(ItemSet(m, mask), ItemSet(m, bigger))
        self._table = vals

    def _value(self, mask):
        return self._table[mask]

    def params(self):
        return {"values": list(self._table)}


class SingletonValuation(Valuation):
    """e_x^p: value p for every bundle containing item x, else 0."""

    kind = "singleton"

    def __init__(self, m: int, item: int, price):
        super().__init__(m)
        if not 0 <= item < m:
            raise ValuationError(f"item {item} outside universe of {m} items")
        self.item = item
        self.price = to_money(price)

    def _value(self, mask):
        return self.price if mask >> self.item & 1 else Fraction(0)

    def params(self):
        return {"item": self.item, "price": self.price}


class AdditiveValuation(Valuation):
    kind = "additive"

    def __init__(self, prices: Sequence):
        prices = _money_list(prices, "price")
        super().__init__(len(prices))
        self.prices = prices

    def _value(self, mask):
        return sum((self.prices[i] for i in bits(mask)), Fraction(0))

    def params(self):
        return {"prices": list(self.prices)}


class UnitDemandValuation(Valuation):
    """Value of the single most valuable item in the bundle."""

    kind = "unit_demand"

    def __init__(self, prices: Sequence):
        prices = _money_list(prices, "price")
        super().__init__(len(prices))
        self.prices = prices

    def _value(self, mask):
        return max((self.prices[i] for i in bits(mask)), default=Fraction(0))

    def params(self):
        return {"prices": list(self.prices)}


class BudgetedAdditiveValuation(Valuation):
    """min(budget, sum of item prices)."""

    kind = "budgeted_additive"

    def __init__(self, prices: Sequence, budget):
        prices = _money_list(prices, "price")
        super().__init__(len(prices))
        self.prices = prices
        self.budget = to_money(budget)

    def _value(self, mask):
        return min(self.budget, sum((self.prices[i] for i in bits(mask)), Fraction(0)))

    def params(self):
        return {"prices": list(self.prices), "budget": self.budget}


class SymmetricValuation(Valuation):
    """Value depends on bundle size only: v(S) = p_1 + ... + p_|S|."""

    kind = "symmetric"

    def __init__(self, marginals: Sequence):
        marginals = _money_list(marginals, "marginal")
        super().__init__(len(marginals))
        self.marginals = marginals
        acc = [Fraction(0)]
        for p in marginals:
            acc.append(acc[-1] + p)
        self._by_size = tuple(acc)

    def _value(self, mask):
        return self._by_size[popcount(mask)]

    def params(self):
        return {"marginals": list(self.marginals)}


class CoverageValuation(Valuation):
    """v(S) = weight of the union of the regions of the items in S."""

    kind = "coverage"

    def __init__(self, regions: Sequence[Iterable[Hashable]], weights: Mapping | None = None):
        regions = [frozenset(r) for r in regions]
        super().__init__(len(regions))
        ground = sorted(set().union(*regions), key=repr)
        weights = dict(weights or {})
        unknown = set(weights) - set(ground)
        if unknown:
            raise ValuationError(f"weights given for elements in no region: {sorted(map(repr, unknown))}")
        self.regions = tuple(regions)
        self.weights = {g: to_money(weights.get(g, 1)) for g in ground}
        self._ground = tuple(ground)
        index = {g: k for k, g in enumerate(ground)}
        self._region_masks = tuple(sum(1 << index[g] for g in r) for r in regions)

    def _value(self, mask):
        covered = 0
        for i in bits(mask):
            covered |= self._region_masks[i]
        return sum((self.weights[self._ground[k]] for k in bits(covered)), Fraction(0))

    def params(self):
        return {"regions": [sorted(r, key=repr) for r in self.regions], "weights": dict(self.weights)}


class ReindexedValuation(Valuation):
    """u(A) = v(expand(A) | given) - v(given) over a re-indexed sub-universe.

    ``index_map[k]`` is the original item behind residual item ``k``.
    """

    def __init__(self, base: Valuation, keep_mask: int, given_mask: int, kind: str):
        if keep_mask & given_mask:
            raise ValueError("kept items and given items overlap")
        super().__init__(popcount(keep_mask))
        self.kind = kind
        self.base = base
        self.given = given_mask
        self.index_map = tuple(bits(keep_mask))
        self._offset = base.value(given_mask)

    def expand(self, mask: int) -> int:
        out = 0
        for k in bits(mask):
            out |= 1 << self.index_map[k]
        return out

    def _value(self, mask):
        return self.base.value(self.expand(mask) | self.given) - self._offset

    def params(self):
        return {"given": list(bits(self.given)), "index_map": list(self.index_map)}


def zero_valuation(m: int) -> AdditiveValuation:
    return AdditiveValuation([0] * m)


def singleton(m: int, item: int, price) -> SingletonValuation:
    return SingletonValuation(m, item, price)


def single_minded(m: int, bundle: Iterable[int], price) -> TableValuation:
    """Value ``price`` for supersets of ``bundle``, 0 otherwise."""
    need = mask_of(bundle, m)
    p = to_money(price)
    return TableValuation(m, [p if mask & need == need else 0 for mask in range(1 << m)])


def table_from_function(m: int, fn: Callable[[ItemSet], object]) -> TableValuation:
    return TableValuation(m, [fn(ItemSet(m, mask)) for mask in range(1 << m)])


_CONSTRUCTORS = {
    "table": lambda p: TableValuation(p["m"], p["values"]),
    "singleton": lambda p: SingletonValuation(p["m"], p["item"], p["price"]),
    "additive": lambda p: AdditiveValuation(p["prices"]),
    "unit_demand": lambda p: UnitDemandValuation(p["prices"]),
    "budgeted_additive": lambda p: BudgetedAdditiveValuation(p["prices"], p["budget"]),
    "symmetric": lambda p: SymmetricValuation(p["marginals"]),
    "coverage": lambda p: CoverageValuation(p["regions"], p.get("weights")),
}


def build_valuation(kind: str, **params) -> Valuation:
    """Construct a valuation by kind name.

    >>> v = build_valuation("budgeted_additive", prices=[2, 2, 4], budget=4)
    >>> v(ItemSet.of(3, [0, 1])), v(ItemSet.of(3, [2])), v(ItemSet.of(3, [0]))
    (Fraction(4, 1), Fraction(4, 1), Fraction(2, 1))
    """
    if kind == "expression":
        from .algebra import expression_valuation

        return expression_valuation(params["expr"], params["m"])
    try:
        ctor = _CONSTRUCTORS[kind]
    except KeyError:
        raise ValuationError(f"unknown valuation kind {kind!r}") from None
    try:
        return ctor(params)
    except KeyError as exc:
        raise ValuationError(f"{kind} valuation missing parameter {exc.args[0]!r}") from None


# ---------------------------------------------------------------------------
# operations


def evaluate(v: Valuation, S: ItemSet) -> Fraction:
    if S.m != v.m:
        raise UniverseMismatch(f"set over {S.m} items, valuation over {v.m}")
    return v.value(S.mask)


def marginal(v: Valuation, W: ItemSet) -> Valuation:
    """The marginal valuation v(. | W) over the residual items X - W.

    The residual items are renumbered 0..m-|W|-1 in increasing order of
    their original index; the mapping is kept in ``index_map``.
    """
    if W.m != v.m:
        raise UniverseMismatch(f"set over {W.m} items, valuation over {v.m}")
    keep = v.full_mask & ~W.mask
    if not keep:
        raise ValueError("marginal given the whole universe leaves no items")
    return ReindexedValuation(v, keep, W.mask, "marginal")


def restrict(v: Valuation, keep: ItemSet) -> Valuation:
    """v restricted to the bundles inside ``keep``, re-indexed like :func:`marginal`."""
    if keep.m != v.m:
        raise UniverseMismatch(f"set over {keep.m} items, valuation over {v.m}")
    if not keep.mask:
        raise ValueError("cannot restrict to the empty set")
    return ReindexedValuation(v, keep.mask, 0, "restriction")


def surplus(v: Valuation, S: ItemSet, p: PriceVector) -> Fraction:
    """v(S) minus the price of S; may be negative."""
    if S.m != v.m or p.m != v.m:
        raise UniverseMismatch("valuation, set and prices must share the universe")
    return v.value(S.mask) - p.total(S.mask)


def demand_set(v: Valuation, p: PriceVector) -> list[ItemSet]:
    """All surplus-maximizing bundles, in canonical order."""
    if p.m != v.m:
        raise UniverseMismatch(f"{p.m} prices for {v.m} items")
    check_enumerable(v.m, "demand set")
    table = v.table()
    best = None
    winners: list[int] = []
    for mask in range(1 << v.m):
        s = table[mask] - p.total(mask)
        if best is None or s > best:
            best, winners = s, [mask]
        elif s == best:
            winners.append(mask)
    return [ItemSet(v.m, mask) for mask in winners]


def scaled_tables(valuations: Sequence[Valuation]) -> tuple[list[list[int]], int]:
    """Integer value tables sharing one denominator ``L`` (value = int / L)."""
    tables = [v.table() for v in valuations]
    L = 1
    for t in tables:
        for q in t:
            L = math.lcm(L, q.denominator)
    return [[q.numerator * (L // q.denominator) for q in t] for t in tables], L
