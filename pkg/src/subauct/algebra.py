"""OR / XOR combination of valuations and the OR/XOR bidding language.

``xor`` takes the pointwise maximum of its operands; ``or_`` splits each
bundle optimally among its operands and remembers the winning split so
callers can ask who gets what.  Bid expressions are trees of singleton
bids joined by n-ary ``Or`` / ``Xor`` nodes.
"""

from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .core import (
    ItemSet,
    Valuation,
    bits,
    check_enumerable,
    submasks,
    to_money,
)
from .errors import NotOxsExpression, NotSubmodular, UniverseMismatch, UniverseTooLarge

XOS_MAX_ITEMS = 8


def _same_universe(valuations: Sequence[Valuation]) -> int:
    if not valuations:
        raise ValueError("need at least one valuation")
    m = valuations[0].m
    for v in valuations[1:]:
        if v.m != m:
            raise UniverseMismatch(f"operands over {m} and {v.m} items")
    return m


class XorValuation(Valuation):
    kind = "xor"

    def __init__(self, parts: Sequence[Valuation]):
        super().__init__(_same_universe(parts))
        self.parts = tuple(parts)

    def _value(self, mask):
        return max(v.value(mask) for v in self.parts)


class OrValuation(Valuation):
    """Optimal split of each bundle among the operands.

    ``partition(S)`` returns the split realizing the value, one bundle per
    operand.  Among equally good splits the one whose last operand gets the
    numerically smallest submask wins, recursively.
    """

    kind = "or"

    def __init__(self, parts: Sequence[Valuation]):
        super().__init__(_same_universe(parts))
        self.parts = tuple(parts)
        # _best[k][mask] = value of OR(parts[0..k]) on mask; _take[k][mask] = share of parts[k]
        self._best: list[dict[int, Fraction]] = [{} for _ in self.parts]
        self._take: list[dict[int, int]] = [{} for _ in self.parts]
        self._memo_lock = threading.RLock()

    def _solve(self, k: int, mask: int) -> Fraction:
        memo = self._best[k]
        hit = memo.get(mask)
        if hit is not None:
            return hit
        part = self.parts[k]
        if k == 0:
            best, take = part.value(mask), mask
        else:
            best, take = None, 0
            for t in submasks(mask):
                val = self._solve(k - 1, mask & ~t) + part.value(t)
                if best is None or val > best:
                    best, take = val, t
        memo[mask] = best
        self._take[k][mask] = take
        return best

    def _value(self, mask):
        with self._memo_lock:
            return self._solve(len(self.parts) - 1, mask)

    def partition_masks(self, mask: int) -> list[int]:
        with self._memo_lock:
            self._solve(len(self.parts) - 1, mask)
            out = [0] * len(self.parts)
            rest = mask
            for k in range(len(self.parts) - 1, -1, -1):
                t = self._take[k][rest]
                out[k] = t
                rest &= ~t
            return out

    def partition(self, S: ItemSet) -> list[ItemSet]:
        """Bundles given to each operand in an optimal split of S."""
        if S.m != self.m:
            raise UniverseMismatch(f"set over {S.m} items, valuation over {self.m}")
        return [ItemSet(self.m, t) for t in self.partition_masks(S.mask)]


def xor(*valuations: Valuation) -> XorValuation:
    """(v1 xor v2)(S) = max(v1(S), v2(S)); n-ary."""
    return XorValuation(valuations)


def or_(*valuations: Valuation) -> OrValuation:
    """(v1 or v2)(S) = max over T subset of S of v1(T) + v2(S - T); n-ary."""
    return OrValuation(valuations)


# ---------------------------------------------------------------------------
# bid expressions


@dataclass(frozen=True)
class Bid:
    """Singleton bid: ``price`` for any bundle containing ``item``."""

    item: int
    price: Fraction

    def __post_init__(self):
        if not isinstance(self.item, int) or self.item < 0:
            raise ValueError(f"bad item index {self.item!r}")
        object.__setattr__(self, "price", to_money(self.price))

    def __repr__(self):
        return f"({self.item}:{self.price})"


@dataclass(frozen=True)
class Or:
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) < 2:
            raise ValueError("OR node needs at least two children; use or_of() for one")

    def __repr__(self):
        return "(" + " v ".join(map(repr, self.children)) + ")"


@dataclass(frozen=True)
class Xor:
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) < 2:
            raise ValueError("XOR node needs at least two children; use xor_of() for one")

    def __repr__(self):
        return "(" + " x ".join(map(repr, self.children)) + ")"


Expression = Union[Bid, Or, Xor]


def or_of(children) -> Expression:
    children = tuple(children)
    if not children:
        raise ValueError("empty OR")
    return children[0] if len(children) == 1 else Or(children)


def xor_of(children) -> Expression:
    children = tuple(children)
    if not children:
        raise ValueError("empty XOR")
    return children[0] if len(children) == 1 else Xor(children)


def expression_items(e: Expression) -> int:
    """Mask of all items mentioned by the expression."""
    if isinstance(e, Bid):
        return 1 << e.item
    out = 0
    for c in e.children:
        out |= expression_items(c)
    return out


class _Evaluator:
    def __init__(self):
        self.support: dict[int, int] = {}

    def supp(self, e) -> int:
        key = id(e)
        s = self.support.get(key)
        if s is None:
            s = self.support[key] = expression_items(e)
        return s

    def value(self, e, mask: int) -> Fraction:
        if isinstance(e, Bid):
            return e.price if mask >> e.item & 1 else Fraction(0)
        mask &= self.supp(e)
        if isinstance(e, Xor):
            return max(self.value(c, mask) for c in e.children)
        if all(isinstance(c, Bid) for c in e.children):
            # OR of singletons: every item serves its best bid
            best: dict[int, Fraction] = {}
            for b in e.children:
                if mask >> b.item & 1 and b.price > best.get(b.item, Fraction(-1)):
                    best[b.item] = b.price
            return sum(best.values(), Fraction(0))
        # general OR: fold children left to right over all submasks of mask
        acc = {t: self.value(e.children[0], t) for t in submasks(mask)}
        for child in e.children[1:]:
            child_vals = {t: self.value(child, t) for t in submasks(mask)}
            acc = {s: max(acc[s & ~t] + child_vals[t] for t in submasks(s)) for s in submasks(mask)}
        return acc[mask]


def eval_expression(e: Expression, S: ItemSet) -> Fraction:
    """Evaluate a bid expression on S by the recursive OR/XOR semantics."""
    if expression_items(e) >> S.m:
        raise UniverseMismatch(f"expression mentions items outside a universe of {S.m}")
    return _Evaluator().value(e, S.mask)


class ExpressionValuation(Valuation):
    kind = "expression"

    def __init__(self, expr: Expression, m: int):
        super().__init__(m)
        if expression_items(expr) >> m:
            raise UniverseMismatch(f"expression mentions items outside a universe of {m}")
        self.expr = expr
        self._eval = _Evaluator()
        self._cache: dict[int, Fraction] = {}
        self._cache_lock = threading.Lock()

    def _value(self, mask):
        hit = self._cache.get(mask)
        if hit is None:
            with self._cache_lock:
                hit = self._cache.get(mask)
                if hit is None:
                    hit = self._cache[mask] = self._eval.value(self.expr, mask)
        return hit

    def params(self):
        return {"expr": self.expr}


def expression_valuation(expr: Expression, m: int) -> ExpressionValuation:
    return ExpressionValuation(expr, m)


def oxs_clauses(e: Expression) -> list[list[Bid]]:
    """Split an OR-of-XOR-of-singletons expression into its XOR clauses.

    Raises NotOxsExpression for any other shape.
    """
    def xor_leaves(node) -> list[Bid]:
        if isinstance(node, Bid):
            return [node]
        if isinstance(node, Xor):
            return [b for c in node.children for b in xor_leaves(c)]
        raise NotOxsExpression(f"OR nested under XOR in {node!r}")

    if isinstance(e, Or):
        clauses = []
        for c in e.children:
            if isinstance(c, Or):
                clauses.extend(oxs_clauses(c))
            else:
                clauses.append(xor_leaves(c))
        return clauses
    return [xor_leaves(e)]


# ---------------------------------------------------------------------------
# XOR of additive clauses


@dataclass(frozen=True)
class XosExpression:
    """XOR of additive valuations; each clause lists one price per item."""

    clauses: tuple[tuple[Fraction, ...], ...] = field()

    def __post_init__(self):
        clauses = tuple(tuple(to_money(p) for p in c) for c in self.clauses)
        if not clauses:
            raise ValueError("XOS expression needs at least one clause")
        m = len(clauses[0])
        if m < 1 or any(len(c) != m for c in clauses):
            raise ValueError("all clauses must list one price per item")
        object.__setattr__(self, "clauses", clauses)

    @property
    def m(self) -> int:
        return len(self.clauses[0])

    def value_of_mask(self, mask: int) -> Fraction:
        """Max over clauses of the clause total on ``mask``."""
        cached = self.__dict__.get("_ints")
        if cached is None:
            L = math.lcm(*(p.denominator for c in self.clauses for p in c))
            rows = [[int(p * L) for p in c] for c in self.clauses]
            peak = max(sum(r) for r in rows)
            dtype = np.int64 if peak < 2**62 else object
            cached = (np.array(rows, dtype=dtype), L)
            object.__setattr__(self, "_ints", cached)
        matrix, L = cached
        cols = list(bits(mask))
        if not cols:
            return Fraction(0)
        return Fraction(int(matrix[:, cols].sum(axis=1).max()), L)

    def to_expression(self) -> Expression:
        ors = []
        for clause in self.clauses:
            bids = [Bid(i, p) for i, p in enumerate(clause) if p > 0] or [Bid(0, 0)]
            ors.append(or_of(bids))
        return xor_of(ors)


def eval_xos(e: XosExpression, S: ItemSet) -> Fraction:
    """Max over clauses of the clause's additive value on S."""
    if S.m != e.m:
        raise UniverseMismatch(f"set over {S.m} items, expression over {e.m}")
    return e.value_of_mask(S.mask)


class XosValuation(Valuation):
    kind = "xos"

    def __init__(self, e: XosExpression):
        super().__init__(e.m)
        self.expr = e

    def _value(self, mask):
        return self.expr.value_of_mask(mask)

    def params(self):
        return {"clauses": [list(c) for c in self.expr.clauses]}


def sm_to_xos(v: Valuation, *, check: bool = True) -> XosExpression:
    """XOS form of a submodular valuation, one clause per item permutation.

    For the permutation pi, item pi(j) is priced at its marginal value given
    pi(1..j-1).  Clauses come in lexicographic permutation order and are not
    deduplicated (see :func:`dedupe_clauses`).
    """
    if v.m > XOS_MAX_ITEMS:
        raise UniverseTooLarge(f"m! clauses for m={v.m}; limit is m <= {XOS_MAX_ITEMS}")
    if check:
        from .hierarchy import is_submodular

        res = is_submodular(v)
        if not res:
            raise NotSubmodular(f"valuation is not submodular, witness {res.witness}")
    table = v.table()
    clauses = []
    for perm in itertools.permutations(range(v.m)):
        prices = [Fraction(0)] * v.m
        held = 0
        for i in perm:
            prices[i] = table[held | 1 << i] - table[held]
            held |= 1 << i
        clauses.append(tuple(prices))
    return XosExpression(tuple(clauses))


def dedupe_clauses(e: XosExpression) -> XosExpression:
    """Drop repeated clauses, keeping first occurrences in order."""
    return XosExpression(tuple(dict.fromkeys(e.clauses)))


def xos_supports(e: XosExpression, v: Valuation) -> bool:
    """True when every clause is dominated by v (checked on all bundles)."""
    check_enumerable(v.m)
    table = v.table()
    for c in e.clauses:
        for mask in range(1 << v.m):
            if sum((c[i] for i in bits(mask)), Fraction(0)) > table[mask]:
                return False
    return True


__all__ = [
    "Bid", "Or", "Xor", "or_of", "xor_of", "Expression", "XorValuation", "OrValuation",
    "ExpressionValuation", "XosExpression", "XosValuation", "xor", "or_", "eval_expression",
    "expression_valuation", "eval_xos", "sm_to_xos", "dedupe_clauses", "oxs_clauses",
    "expression_items", "xos_supports",
]
