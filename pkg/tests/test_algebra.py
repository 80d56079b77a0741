import itertools
import math
import random
from fractions import Fraction

import pytest

from generators import random_cf_table, random_gs, random_mixed, random_oxs, random_sm, random_xos
from subauct import (
    AdditiveValuation,
    Bid,
    BudgetedAdditiveValuation,
    ItemSet,
    NotOxsExpression,
    NotSubmodular,
    Or,
    SymmetricValuation,
    UniverseMismatch,
    UniverseTooLarge,
    Xor,
    XosExpression,
    XosValuation,
    dedupe_clauses,
    eval_expression,
    eval_xos,
    expression_valuation,
    is_complement_free,
    is_gross_substitutes,
    is_submodular,
    or_,
    or_of,
    oxs_clauses,
    sm_to_xos,
    xor,
    xor_of,
)
from subauct.algebra import expression_items, xos_supports


def or_by_assignment(valuations, mask: int) -> Fraction:
    """OR value by trying every way to hand each item in ``mask`` to an operand."""
    items = [i for i in range(valuations[0].m) if mask >> i & 1]
    best = Fraction(0)
    for owners in itertools.product(range(len(valuations)), repeat=len(items)):
        shares = [0] * len(valuations)
        for item, j in zip(items, owners):
            shares[j] |= 1 << item
        best = max(best, sum((v.value(s) for v, s in zip(valuations, shares)), Fraction(0)))
    return best


def expression_by_assignment(e, mask: int) -> Fraction:
    """Recursive OR/XOR semantics with OR evaluated by item assignment."""
    if isinstance(e, Bid):
        return e.price if mask >> e.item & 1 else Fraction(0)
    if isinstance(e, Xor):
        return max(expression_by_assignment(c, mask) for c in e.children)
    items = [i for i in range(20) if mask >> i & 1]
    best = Fraction(0)
    for owners in itertools.product(range(len(e.children)), repeat=len(items)):
        shares = [0] * len(e.children)
        for item, j in zip(items, owners):
            shares[j] |= 1 << item
        best = max(best, sum((expression_by_assignment(c, s) for c, s in zip(e.children, shares)), Fraction(0)))
    return best


class TestOperators:
    def test_xor_is_pointwise_max(self):
        u, w = AdditiveValuation([1, 5]), AdditiveValuation([4, 1])
        assert list(xor(u, w).table()) == [0, 4, 5, 6]

    def test_or_of_budgeted_and_additive(self):
        u = BudgetedAdditiveValuation([3, 5, 3], 6)
        w = AdditiveValuation([1, 2, 0])
        v = or_(u, w)
        assert list(v.table()) == [0, 3, 5, 6, 3, 6, 6, 8]
        assert v.partition(ItemSet.full(3)) == [ItemSet.of(3, [0, 2]), ItemSet.of(3, [1])]

    def test_universe_mismatch(self):
        with pytest.raises(UniverseMismatch):
            or_(AdditiveValuation([1]), AdditiveValuation([1, 1]))
        with pytest.raises(UniverseMismatch):
            or_(AdditiveValuation([1, 1])).partition(ItemSet.full(3))

    def test_or_against_assignment_oracle(self, rng):
        for _ in range(60):
            m = rng.randint(1, 4)
            parts = [random_mixed(rng, m) for _ in range(rng.randint(1, 3))]
            v = or_(*parts)
            for mask in range(1 << m):
                assert v.value(mask) == or_by_assignment(parts, mask)

    def test_partition_realizes_value(self, rng):
        for _ in range(40):
            m = rng.randint(1, 4)
            parts = [random_mixed(rng, m) for _ in range(3)]
            v = or_(*parts)
            for mask in range(1 << m):
                split = v.partition_masks(mask)
                assert sum(split) == mask and all(a & b == 0 for a, b in itertools.combinations(split, 2))
                assert sum((p.value(s) for p, s in zip(parts, split)), Fraction(0)) == v.value(mask)

    def test_or_and_xor_associate(self, rng):
        for _ in range(20):
            m = rng.randint(1, 3)
            a, b, c = (random_mixed(rng, m) for _ in range(3))
            assert or_(or_(a, b), c).table() == or_(a, or_(b, c)).table() == or_(a, b, c).table()
            assert xor(xor(a, b), c).table() == xor(a, b, c).table()


class TestExpressions:
    def test_node_arity(self):
        with pytest.raises(ValueError):
            Or((Bid(0, 1),))
        assert or_of([Bid(0, 1)]) == Bid(0, 1)
        assert isinstance(xor_of([Bid(0, 1), Bid(1, 1)]), Xor)

    def test_bid_validation(self):
        with pytest.raises(ValueError):
            Bid(-1, 3)

    def test_symmetric_example_as_bids(self):
        units = or_of(Bid(i, 1) for i in range(3))
        e = xor_of([Bid(0, 2), Bid(1, 2), Bid(2, 2), units])
        assert expression_valuation(e, 3).table() == SymmetricValuation([2, 0, 1]).table()

    def test_items_outside_universe(self):
        with pytest.raises(UniverseMismatch):
            expression_valuation(Bid(3, 1), 2)
        with pytest.raises(UniverseMismatch):
            eval_expression(Bid(3, 1), ItemSet.full(2))

    def test_against_assignment_oracle(self, rng):
        def tree(depth, m):
            if depth == 0 or rng.random() < 0.3:
                return Bid(rng.randrange(m), rng.randint(0, 9))
            kids = [tree(depth - 1, m) for _ in range(rng.randint(2, 3))]
            return Or(tuple(kids)) if rng.random() < 0.5 else Xor(tuple(kids))

        for _ in range(80):
            m = rng.randint(1, 4)
            e = tree(3, m)
            v = expression_valuation(e, m)
            for mask in range(1 << m):
                assert v.value(mask) == expression_by_assignment(e, mask)
                assert eval_expression(e, ItemSet(m, mask)) == v.value(mask)

    def test_expression_items(self):
        assert expression_items(Or((Bid(0, 1), Xor((Bid(2, 1), Bid(0, 3)))))) == 0b101

    def test_oxs_clauses(self):
        e = Or((Xor((Bid(0, 1), Bid(1, 2))), Bid(2, 3), Or((Bid(0, 4), Bid(1, 1)))))
        assert [[b.item for b in c] for c in oxs_clauses(e)] == [[0, 1], [2], [0], [1]]
        assert oxs_clauses(Bid(0, 1)) == [[Bid(0, 1)]]

    def test_oxs_rejects_or_under_xor(self):
        with pytest.raises(NotOxsExpression):
            oxs_clauses(Xor((Or((Bid(0, 1), Bid(1, 1))), Bid(0, 3))))


class TestXos:
    def test_eval(self):
        e = XosExpression(((1, 2, 0), (3, 0, 0)))
        assert eval_xos(e, ItemSet.of(3, [0])) == 3
        assert eval_xos(e, ItemSet.of(3, [0, 1])) == 3
        assert eval_xos(e, ItemSet.full(3)) == 3
        with pytest.raises(UniverseMismatch):
            eval_xos(e, ItemSet.full(2))

    def test_to_expression_matches(self, rng):
        for _ in range(20):
            v = random_xos(rng, rng.randint(1, 4))
            assert expression_valuation(v.expr.to_expression(), v.m).table() == v.table()

    def test_clause_shape_checked(self):
        with pytest.raises(ValueError):
            XosExpression(((1, 2), (3,)))
        with pytest.raises(ValueError):
            XosExpression(())

    def test_sm_to_xos_budget_example(self):
        v = BudgetedAdditiveValuation([2, 2, 4], 4)
        e = sm_to_xos(v)
        assert len(e.clauses) == 6
        assert e.clauses[0] == (2, 2, 0)  # permutation 0, 1, 2
        assert XosValuation(e).table() == v.table()
        assert xos_supports(e, v)
        assert len(dedupe_clauses(e).clauses) <= 6

    def test_sm_to_xos_rejects_non_submodular(self):
        with pytest.raises(NotSubmodular):
            sm_to_xos(SymmetricValuation([2, 0, 1]))

    def test_sm_to_xos_size_cap(self):
        with pytest.raises(UniverseTooLarge):
            sm_to_xos(AdditiveValuation([1] * 9))

    def test_sm_to_xos_random(self, rng):
        for _ in range(30):
            m = rng.randint(1, 5)
            v = random_sm(rng, m)
            e = sm_to_xos(v)
            assert len(e.clauses) == math.factorial(m)
            assert XosValuation(e).table() == v.table()


class TestClosure:
    def test_cf_closed_under_or_and_xor(self, rng):
        for _ in range(60):
            m = rng.randint(1, 4)
            a, b = random_cf_table(rng, m), random_xos(rng, m)
            assert is_complement_free(a) and is_complement_free(b)
            assert is_complement_free(or_(a, b))
            assert is_complement_free(xor(a, b))

    def test_gs_closed_under_or(self, rng):
        for _ in range(60):
            m = rng.randint(1, 4)
            a, b = random_gs(rng, m), random_gs(rng, m)
            assert is_gross_substitutes(or_(a, b))

    def test_oxs_or_is_gs(self, rng):
        for _ in range(20):
            m = rng.randint(1, 4)
            assert is_gross_substitutes(or_(random_oxs(rng, m), random_oxs(rng, m)))

    def test_sm_not_closed_under_or(self):
        v = or_(BudgetedAdditiveValuation([3, 5, 3], 6), AdditiveValuation([1, 2, 0]))
        res = is_submodular(v)
        assert not res
        A, B = res.witness.sets
        assert (A, B) == (ItemSet.of(3, [0, 1]), ItemSet.of(3, [1, 2]))
        assert v(A) + v(B) == 12 and v(A | B) + v(A & B) == 13


def test_concurrent_or_evaluation():
    from concurrent.futures import ThreadPoolExecutor

    rng = random.Random(5)
    parts = [random_mixed(rng, 5) for _ in range(3)]
    v = or_(*parts)
    with ThreadPoolExecutor(4) as pool:
        got = list(pool.map(v.value, range(32)))
    fresh = or_(*parts)
    assert got == [fresh.value(mask) for mask in range(32)]
