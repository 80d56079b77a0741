"""Winner determination: exact brute force, greedy, ascending prices, matching.

Brute force enumerates all n^m assignments of items to bidders with numpy
over integer-scaled value tables.  An assignment is the tuple
``(owner of item 0, ..., owner of item m-1)``; among optimal assignments the
lexicographically smallest is returned.
"""

from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import networkx as nx
import numpy as np

from .algebra import ExpressionValuation, or_, oxs_clauses
from .core import (
    AdditiveValuation,
    BudgetedAdditiveValuation,
    ItemSet,
    PriceVector,
    SingletonValuation,
    SymmetricValuation,
    UnitDemandValuation,
    Valuation,
    check_enumerable,
    scaled_tables,
    to_money,
)
from .errors import (
    DimensionMismatch,
    InstanceTooLarge,
    NonTermination,
    NotOxsExpression,
    UniverseMismatch,
)
from .hierarchy import Check
from .lp import find_feasible

MAX_ASSIGNMENTS = 10**7
_CHUNK = 1 << 18


@dataclass(frozen=True)
class Allocation:
    """A partition of all items into one bundle per bidder."""

    bundles: tuple[ItemSet, ...]

    def __post_init__(self):
        bundles = tuple(self.bundles)
        object.__setattr__(self, "bundles", bundles)
        if not bundles:
            raise ValueError("allocation needs at least one bundle")
        m = bundles[0].m
        seen = 0
        for b in bundles:
            if b.m != m:
                raise UniverseMismatch("bundles over different universes")
            if b.mask & seen:
                raise ValueError("bundles overlap")
            seen |= b.mask
        if seen != (1 << m) - 1:
            raise ValueError("allocation leaves items unassigned")

    @classmethod
    def from_owners(cls, owners: Sequence[int], n: int) -> "Allocation":
        masks = [0] * n
        for item, j in enumerate(owners):
            masks[j] |= 1 << item
        return cls(tuple(ItemSet(len(owners), mk) for mk in masks))

    @classmethod
    def from_masks(cls, masks: Sequence[int], m: int) -> "Allocation":
        return cls(tuple(ItemSet(m, mk) for mk in masks))

    @property
    def m(self) -> int:
        return self.bundles[0].m

    @property
    def n(self) -> int:
        return len(self.bundles)

    def owners(self) -> tuple[int, ...]:
        out = [0] * self.m
        for j, b in enumerate(self.bundles):
            for i in b:
                out[i] = j
        return tuple(out)

    def value(self, valuations: Sequence[Valuation]) -> Fraction:
        if len(valuations) != self.n:
            raise DimensionMismatch(f"{len(valuations)} valuations for {self.n} bundles")
        return sum((v(b) for v, b in zip(valuations, self.bundles)), Fraction(0))


@dataclass(frozen=True)
class AuctionInstance:
    valuations: tuple[Valuation, ...]

    def __init__(self, valuations: Sequence[Valuation]):
        valuations = tuple(valuations)
        if not valuations:
            raise ValueError("an auction needs at least one bidder")
        m = valuations[0].m
        if any(v.m != m for v in valuations):
            raise UniverseMismatch("bidders value different universes")
        object.__setattr__(self, "valuations", valuations)

    @property
    def m(self) -> int:
        return self.valuations[0].m

    @property
    def n(self) -> int:
        return len(self.valuations)

    def value(self, allocation: Allocation) -> Fraction:
        return allocation.value(self.valuations)


@dataclass(frozen=True)
class WalrasianCertificate:
    prices: PriceVector
    allocation: Allocation


# ---------------------------------------------------------------------------
# exact optimum


def _check_size(inst: AuctionInstance) -> None:
    if inst.n ** inst.m > MAX_ASSIGNMENTS:
        raise InstanceTooLarge(f"{inst.n}^{inst.m} assignments exceed the limit of {MAX_ASSIGNMENTS}")


def _scan(inst: AuctionInstance):
    """Yield (first index, int totals) chunks over all assignments in order."""
    _check_size(inst)
    n, m = inst.n, inst.m
    tables, L = scaled_tables(inst.valuations)
    peak = sum(max(t) for t in tables)
    dtype = np.int64 if peak < 2**62 else object
    arrays = [np.array(t, dtype=dtype) for t in tables]
    weights = [n ** (m - 1 - i) for i in range(m)]
    total = n**m
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        masks = np.zeros((n, idx.size), dtype=np.int64)
        for i in range(m):
            digit = (idx // weights[i]) % n
            masks[digit, np.arange(idx.size)] |= 1 << i
        vals = arrays[0][masks[0]]
        for k in range(1, n):
            vals = vals + arrays[k][masks[k]]
        yield start, vals, L


def _decode(index: int, n: int, m: int) -> list[int]:
    owners = [0] * m
    for i in range(m - 1, -1, -1):
        index, owners[i] = divmod(index, n)
    return owners


def optimal_allocate(inst: AuctionInstance) -> tuple[Allocation, Fraction]:
    """Maximum-value allocation by exhaustive search (lowest assignment on ties)."""
    best, best_idx, L = None, 0, 1
    for start, vals, L in _scan(inst):
        k = int(np.argmax(vals))
        if best is None or vals[k] > best:
            best, best_idx = vals[k], start + k
    alloc = Allocation.from_owners(_decode(best_idx, inst.n, inst.m), inst.n)
    return alloc, Fraction(int(best), L)


def optimal_allocations(inst: AuctionInstance) -> tuple[list[Allocation], Fraction]:
    """Every optimal allocation, in canonical assignment order."""
    best, hits, L = None, [], 1
    for start, vals, L in _scan(inst):
        top = vals.max()
        if best is None or top > best:
            best, hits = top, []
        if top == best:
            hits.extend(start + int(k) for k in np.flatnonzero(vals == best))
    allocs = [Allocation.from_owners(_decode(h, inst.n, inst.m), inst.n) for h in hits]
    return allocs, Fraction(int(best), L)


def optimal_welfare(inst: AuctionInstance) -> Fraction:
    """Optimal value through the OR-combination of all bidders (independent route)."""
    check_enumerable(inst.m)
    return or_(*inst.valuations).value((1 << inst.m) - 1)


# ---------------------------------------------------------------------------
# exact optimum over classes of interchangeable items


def _item_signatures(v: Valuation) -> list:
    """Per item, what ``v`` can tell about it; equal entries are interchangeable for ``v``."""
    # int pairs hash much faster than Fractions
    if isinstance(v, (AdditiveValuation, UnitDemandValuation, BudgetedAdditiveValuation)):
        return [(p.numerator, p.denominator) for p in v.prices]
    if isinstance(v, SingletonValuation):
        return [(v.price.numerator, v.price.denominator) if i == v.item else (0, 1) for i in range(v.m)]
    if isinstance(v, SymmetricValuation):
        return [0] * v.m
    return [("item", i) for i in range(v.m)]


def item_classes(inst: AuctionInstance) -> list[tuple[int, ...]]:
    """Groups of items that every bidder treats alike, read off the valuation
    parameters (equal prices for additive-type kinds, anything for symmetric
    ones).  Kinds without such structure put each item in its own group.
    Groups are ordered by their smallest item."""
    groups: dict[tuple, list[int]] = {}
    for i, key in enumerate(zip(*(_item_signatures(v) for v in inst.valuations))):
        groups.setdefault(key, []).append(i)
    return sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])


@lru_cache(maxsize=512)
def _compositions(total: int, parts: int) -> np.ndarray:
    """All ways to split ``total`` into ``parts`` ordered counts, first part largest first."""
    if parts == 1:
        return np.array([[total]], dtype=np.int64)
    rows = [np.column_stack([np.full(len(rest), k, dtype=np.int64), rest])
            for k in range(total, -1, -1) for rest in [_compositions(total - k, parts - 1)]]
    out = np.concatenate(rows)
    out.flags.writeable = False
    return out


def _generic_class_values(v: Valuation, counts: np.ndarray, classes) -> list[Fraction]:
    """Evaluate one concrete bundle per distinct count vector."""
    cache: dict[tuple, Fraction] = {}
    out = []
    for row in counts:
        key = tuple(int(c) for c in row)
        if key not in cache:
            mask = 0
            for cls, c in zip(classes, key):
                for item in cls[:c]:
                    mask |= 1 << item
            cache[key] = v.value(mask)
        out.append(cache[key])
    return out


def _scaled_class_values(v: Valuation, reps: list[int], counts: np.ndarray, L: int, generic) -> np.ndarray:
    """Values times ``L`` for each row of per-class counts."""
    def ints(xs):
        return np.array([x.numerator * (L // x.denominator) for x in xs], dtype=np.int64)

    if isinstance(v, AdditiveValuation):
        return counts @ ints(v.prices[r] for r in reps)
    if isinstance(v, BudgetedAdditiveValuation):
        return np.minimum(counts @ ints(v.prices[r] for r in reps), int(v.budget * L))
    if isinstance(v, UnitDemandValuation):
        return ((counts > 0) * ints(v.prices[r] for r in reps)).max(axis=1)
    if isinstance(v, SymmetricValuation):
        return ints(v._by_size)[counts.sum(axis=1)]
    return ints(generic)


def _parameters(v: Valuation, reps: list[int]) -> list[Fraction]:
    """The numbers the count-based evaluation of ``v`` uses (empty for generic kinds)."""
    if isinstance(v, (AdditiveValuation, UnitDemandValuation)):
        return [v.prices[r] for r in reps]
    if isinstance(v, BudgetedAdditiveValuation):
        return [v.prices[r] for r in reps] + [v.budget]
    if isinstance(v, SymmetricValuation):
        return list(v._by_size)
    return []


def optimal_allocate_by_classes(inst: AuctionInstance) -> tuple[Allocation, Fraction]:
    """Maximum-value allocation by enumerating how many items of each class
    (see ``item_classes``) each bidder receives.

    Exact for any instance; it only pays off when classes are large, e.g.
    additive or budgeted bidders with repeated prices, where it reaches
    universes far beyond brute force.  Within a class bidder 0 receives the
    lowest items, bidder 1 the next ones, and so on; among optimal count
    vectors the first in enumeration order wins (bidder 0 takes as many as
    possible of the earliest class).
    """
    n = inst.n
    classes = item_classes(inst)
    reps = [c[0] for c in classes]
    options = [_compositions(len(c), n) for c in classes]
    sizes = [len(o) for o in options]
    size = math.prod(sizes)
    if size > MAX_ASSIGNMENTS:
        raise InstanceTooLarge(f"{size} class splits exceed the limit of {MAX_ASSIGNMENTS}")
    grids = np.indices(sizes).reshape(len(sizes), -1)  # classes x splits
    # split[s, k, j]: items of class k that bidder j gets in split s
    split = np.stack([o[g] for o, g in zip(options, grids)], axis=1)
    counts = [split[:, :, j] for j in range(n)]
    params = [_parameters(v, reps) for v in inst.valuations]
    generic = [
        None if ps else _generic_class_values(v, counts[j], classes)
        for j, (v, ps) in enumerate(zip(inst.valuations, params))
    ]
    numbers = [x for ps in params for x in ps] + [x for g in generic if g for x in g]
    L = math.lcm(*{x.denominator for x in numbers}) if numbers else 1
    # parameters and values are nonnegative
    peak = max((x.numerator * (L // x.denominator) for x in numbers), default=0)
    if peak * max(inst.m, 1) * n >= 2**62:
        raise InstanceTooLarge("values too large for exact 64-bit accumulation")
    total = np.zeros(size, dtype=np.int64)
    for j, v in enumerate(inst.valuations):
        total += _scaled_class_values(v, reps, counts[j], L, generic[j])
    k = int(np.argmax(total))
    masks = [0] * n
    for cls, row in zip(classes, split[k]):
        pos = 0
        for j in range(n):
            c = int(row[j])
            for item in cls[pos:pos + c]:
                masks[j] |= 1 << item
            pos += c
    return Allocation.from_masks(masks, inst.m), Fraction(int(total[k]), L)


# ---------------------------------------------------------------------------
# greedy


OrderRule = Callable[[AuctionInstance, Sequence[ItemSet]], int]


def _best_bidder(inst: AuctionInstance, masks: Sequence[int], item: int) -> int:
    best_j, best = 0, None
    for j, v in enumerate(inst.valuations):
        gain = v.marginal_value(item, masks[j])
        if best is None or gain > best:
            best_j, best = j, gain
    return best_j


def greedy_allocate(inst: AuctionInstance, order: Sequence[int] | OrderRule | None = None) -> Allocation:
    """Give each item in turn to the bidder with the largest marginal value.

    ``order`` is a sequence of items (default 0..m-1) or a rule called as
    ``order(inst, partial_bundles)`` that picks the next unallocated item.
    Ties go to the lowest bidder index.
    """
    m, n = inst.m, inst.n
    masks = [0] * n
    if order is None or not callable(order):
        seq = list(range(m)) if order is None else list(order)
        if sorted(seq) != list(range(m)):
            raise ValueError("order must list every item exactly once")
        for item in seq:
            masks[_best_bidder(inst, masks, item)] |= 1 << item
    else:
        for _ in range(m):
            state = [ItemSet(m, mk) for mk in masks]
            item = order(inst, state)
            taken = 0
            for mk in masks:
                taken |= mk
            if not 0 <= item < m or taken >> item & 1:
                raise ValueError(f"order rule returned unavailable item {item}")
            masks[_best_bidder(inst, masks, item)] |= 1 << item
    return Allocation.from_masks(masks, m)


def _unallocated(inst: AuctionInstance, state: Sequence[ItemSet]) -> list[int]:
    taken = 0
    for b in state:
        taken |= b.mask
    return [i for i in range(inst.m) if not taken >> i & 1]


def greedy_order_heuristic(inst: AuctionInstance, state: Sequence[ItemSet]) -> int:
    """Unallocated item with the largest gap between the best and second-best
    marginal values (lowest item on ties)."""
    free = _unallocated(inst, state)
    if not free:
        raise ValueError("no unallocated items remain")
    best_item, best_gap = None, None
    for item in free:
        gains = sorted((v.marginal_value(item, b.mask) for v, b in zip(inst.valuations, state)), reverse=True)
        gap = gains[0] - (gains[1] if len(gains) > 1 else 0)
        if best_gap is None or gap > best_gap:
            best_item, best_gap = item, gap
    return best_item


def most_valuable_first(inst: AuctionInstance, state: Sequence[ItemSet]) -> int:
    """Unallocated item with the highest current marginal value to any bidder."""
    free = _unallocated(inst, state)
    if not free:
        raise ValueError("no unallocated items remain")
    best_item, best = None, None
    for item in free:
        top = max(v.marginal_value(item, b.mask) for v, b in zip(inst.valuations, state))
        if best is None or top > best:
            best_item, best = item, top
    return best_item


# ---------------------------------------------------------------------------
# ascending prices


@dataclass
class AscendingResult:
    prices: PriceVector
    allocation: Allocation
    welfare: Fraction
    rounds: int
    demanded: tuple[ItemSet, ...]
    price_history: list[PriceVector] = field(repr=False, default_factory=list)


def _assign_leftovers(inst: AuctionInstance, masks: list[int]) -> list[int]:
    taken = 0
    for mk in masks:
        taken |= mk
    for item in range(inst.m):
        if not taken >> item & 1:
            masks[_best_bidder(inst, masks, item)] |= 1 << item
    return masks


def kelso_crawford(inst: AuctionInstance, epsilon, max_rounds: int | None = None) -> AscendingResult:
    """Simultaneous ascending prices with increment ``epsilon``.

    Each round every bidder reports one preferred bundle (smallest size, then
    lowest mask, among surplus maximizers); every item wanted by two or more
    bidders gets ``epsilon`` dearer.  When no item is over-demanded each
    bidder keeps its reported bundle and items nobody wants go to the
    bidder with the largest marginal value for them.
    """
    eps = to_money(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    m, n = inst.m, inst.n
    check_enumerable(m, "ascending auction demand")
    tables, L0 = scaled_tables(inst.valuations)
    L = math.lcm(L0, eps.denominator)
    scale = L // L0
    tabs = np.array([[x * scale for x in t] for t in tables], dtype=np.int64)
    step = int(eps * L)
    if max_rounds is None:
        top = max(v.value((1 << m) - 1) for v in inst.valuations)
        max_rounds = math.ceil(top / eps) * m + 1

    masks_all = np.arange(1 << m, dtype=np.int64)
    member = ((masks_all[:, None] >> np.arange(m)) & 1).astype(np.int64)  # 2^m x m
    tie_key = member.sum(axis=1) * (1 << m) + masks_all
    prices = np.zeros(m, dtype=np.int64)
    history = [PriceVector(Fraction(0) for _ in range(m))]
    rounds = 0
    while True:
        cost = member @ prices
        demand = []
        for j in range(n):
            s = tabs[j] - cost
            best = s.max()
            demand.append(int(np.where(s == best, tie_key, np.iinfo(np.int64).max).argmin()))
        counts = np.zeros(m, dtype=np.int64)
        for d in demand:
            counts += member[d]
        over = counts >= 2
        if not over.any():
            break
        rounds += 1
        if rounds > max_rounds:
            raise NonTermination(f"no clearing after {max_rounds} rounds")
        prices = prices + step * over
        history.append(PriceVector(Fraction(int(p), L) for p in prices))
    masks = _assign_leftovers(inst, list(demand))
    alloc = Allocation.from_masks(masks, m)
    return AscendingResult(
        prices=PriceVector(Fraction(int(p), L) for p in prices),
        allocation=alloc,
        welfare=inst.value(alloc),
        rounds=rounds,
        demanded=tuple(ItemSet(m, d) for d in demand),
        price_history=history,
    )


# ---------------------------------------------------------------------------
# OR-of-XOR-of-singletons via matching


def _xor_clauses(v: Valuation) -> list[dict[int, Fraction]]:
    """Each XOR clause as {item: best price}."""
    if isinstance(v, ExpressionValuation):
        raw = [[(b.item, b.price) for b in clause] for clause in oxs_clauses(v.expr)]
    elif isinstance(v, AdditiveValuation):
        raw = [[(i, p)] for i, p in enumerate(v.prices)]
    elif isinstance(v, UnitDemandValuation):
        raw = [list(enumerate(v.prices))]
    elif isinstance(v, SingletonValuation):
        raw = [[(v.item, v.price)]]
    else:
        raise NotOxsExpression(f"{v.kind} valuation is not given as an OR of XORs of singletons")
    clauses = []
    for clause in raw:
        best: dict[int, Fraction] = {}
        for item, price in clause:
            if price > best.get(item, Fraction(-1)):
                best[item] = price
        clauses.append(best)
    return clauses


def oxs_matching_allocate(inst: AuctionInstance) -> tuple[Allocation, Fraction]:
    """Optimal allocation for OXS bidders by maximum-weight bipartite matching.

    Left nodes are the XOR clauses of all bidders, right nodes the items,
    and an edge carries the clause's bid on the item.  Returns the
    allocation and the weight of the matching.
    """
    G = nx.Graph()
    owner = {}
    edges = []
    for j, v in enumerate(inst.valuations):
        for c, clause in enumerate(_xor_clauses(v)):
            node = ("clause", j, c)
            owner[node] = j
            for item, price in clause.items():
                if price > 0:
                    edges.append((node, ("item", item), price))
    L = math.lcm(*(p.denominator for *_, p in edges)) if edges else 1
    for a, b, p in edges:
        G.add_edge(a, b, weight=int(p * L))
    matching = nx.max_weight_matching(G, maxcardinality=False)
    masks = [0] * inst.n
    weight = 0
    for a, b in matching:
        clause, item = (a, b) if a[0] == "clause" else (b, a)
        masks[owner[clause]] |= 1 << item[1]
        weight += G[a][b]["weight"]
    masks = _assign_leftovers(inst, masks)
    return Allocation.from_masks(masks, inst.m), Fraction(weight, L)


# ---------------------------------------------------------------------------
# Walrasian equilibria


def verify_walrasian(inst: AuctionInstance, cert: WalrasianCertificate) -> Check:
    """Every bidder's bundle maximizes its surplus at the certificate prices.

    Witness on failure: (bidder, a strictly better bundle).
    """
    if cert.prices.m != inst.m or cert.allocation.n != inst.n or cert.allocation.m != inst.m:
        raise DimensionMismatch("certificate does not match the instance dimensions")
    check_enumerable(inst.m)
    p = cert.prices
    for j, (v, bundle) in enumerate(zip(inst.valuations, cert.allocation.bundles)):
        mine = v.value(bundle.mask) - p.total(bundle.mask)
        table = v.table()
        for mask in range(1 << inst.m):
            if table[mask] - p.total(mask) > mine:
                return Check(False, (j, ItemSet(inst.m, mask)))
    return Check(True)


def supporting_prices(inst: AuctionInstance, alloc: Allocation) -> PriceVector | None:
    """Prices at which ``alloc`` is a Walrasian allocation, or None."""
    m = inst.m
    tables, L = scaled_tables(inst.valuations)
    rows, rhs = [], []
    seen = set()
    for t, bundle in zip(tables, alloc.bundles):
        A = bundle.mask
        for S in range(1 << m):
            if S == A:
                continue
            # p(A) - p(S) <= v(A) - v(S)
            row = tuple((A >> i & 1) - (S >> i & 1) for i in range(m))
            key = (row, t[A] - t[S])
            if key in seen:
                continue
            seen.add(key)
            rows.append(list(row))
            rhs.append(t[A] - t[S])
    x = find_feasible(m, rows, rhs)
    if x is None:
        return None
    return PriceVector(xi / L for xi in x)


def exists_walrasian(inst: AuctionInstance) -> WalrasianCertificate | None:
    """A Walrasian equilibrium if one exists.

    Any equilibrium allocation is optimal, so trying every optimal
    allocation is exhaustive.
    """
    check_enumerable(inst.m)
    allocs, _ = optimal_allocations(inst)
    for alloc in allocs:
        prices = supporting_prices(inst, alloc)
        if prices is not None:
            return WalrasianCertificate(prices, alloc)
    return None


# ---------------------------------------------------------------------------


def knapsack_instance(a: Sequence[int], t: int) -> AuctionInstance:
    """Two bidders whose optimum is sum(a) + t iff some subset of a sums to t.

    Bidder 0 is additive with prices a_i; bidder 1 is additive with prices
    2 a_i under a budget of 2 t.
    """
    if not a or any(not isinstance(x, int) or x <= 0 for x in a):
        raise ValueError("a must be a nonempty list of positive integers")
    if not isinstance(t, int) or not 0 < t <= sum(a):
        raise ValueError("t must be a positive integer no larger than sum(a)")
    return AuctionInstance([AdditiveValuation(a), BudgetedAdditiveValuation([2 * x for x in a], 2 * t)])


__all__ = [
    "Allocation", "AuctionInstance", "WalrasianCertificate", "AscendingResult", "MAX_ASSIGNMENTS",
    "optimal_allocate", "optimal_allocations", "optimal_welfare", "item_classes",
    "optimal_allocate_by_classes", "greedy_allocate",
    "greedy_order_heuristic", "most_valuable_first", "kelso_crawford", "oxs_matching_allocate",
    "verify_walrasian", "supporting_prices", "exists_walrasian", "knapsack_instance",
]
