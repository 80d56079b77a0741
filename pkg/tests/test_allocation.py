import itertools
from fractions import Fraction

import pytest

from generators import random_a_submodular, random_gs, random_mixed, random_oxs, random_sm
from subauct import (
    AdditiveValuation,
    Allocation,
    AuctionInstance,
    BudgetedAdditiveValuation,
    DimensionMismatch,
    InstanceTooLarge,
    ItemSet,
    NonTermination,
    NotOxsExpression,
    PriceVector,
    SymmetricValuation,
    TableValuation,
    UnitDemandValuation,
    UniverseMismatch,
    WalrasianCertificate,
    exists_walrasian,
    greedy_allocate,
    greedy_order_heuristic,
    is_gross_substitutes,
    item_classes,
    kelso_crawford,
    knapsack_instance,
    most_valuable_first,
    optimal_allocate,
    optimal_allocate_by_classes,
    optimal_allocations,
    optimal_welfare,
    oxs_matching_allocate,
    supporting_prices,
    verify_walrasian,
)
from subauct.algebra import Bid, Or, Xor, expression_valuation
from subauct.fixtures import budget_limited_three_items, greedy_sharpness_pair


def best_by_product(inst):
    """Optimum by itertools over owner tuples, first maximizer kept."""
    best, arg = None, None
    for owners in itertools.product(range(inst.n), repeat=inst.m):
        masks = [0] * inst.n
        for i, j in enumerate(owners):
            masks[j] |= 1 << i
        val = sum((v.value(mk) for v, mk in zip(inst.valuations, masks)), Fraction(0))
        if best is None or val > best:
            best, arg = val, owners
    return best, arg


def subset_sum(a, t) -> bool:
    reach = {0}
    for x in a:
        reach |= {s + x for s in reach}
    return t in reach


def random_instance(rng, make=random_mixed, m_max=4, n_max=3):
    m = rng.randint(1, m_max)
    return AuctionInstance([make(rng, m) for _ in range(rng.randint(1, n_max))])


class TestTypes:
    def test_allocation_must_partition(self):
        with pytest.raises(ValueError):
            Allocation((ItemSet.of(2, [0]), ItemSet.of(2, [0, 1])))
        with pytest.raises(ValueError):
            Allocation((ItemSet.of(2, [0]),))
        with pytest.raises(UniverseMismatch):
            Allocation((ItemSet.of(2, [0, 1]), ItemSet.empty(3)))
        with pytest.raises(ValueError):
            Allocation(())

    def test_owners_round_trip(self):
        a = Allocation.from_owners([1, 0, 1], 2)
        assert a.owners() == (1, 0, 1) and a.m == 3 and a.n == 2

    def test_value_dimension(self):
        a = Allocation.from_owners([0], 2)
        with pytest.raises(DimensionMismatch):
            a.value([AdditiveValuation([1])])

    def test_instance_checks(self):
        with pytest.raises(ValueError):
            AuctionInstance([])
        with pytest.raises(UniverseMismatch):
            AuctionInstance([AdditiveValuation([1]), AdditiveValuation([1, 2])])


class TestOptimal:
    def test_matches_product_oracle(self, rng):
        for _ in range(150):
            inst = random_instance(rng)
            alloc, val = optimal_allocate(inst)
            best, owners = best_by_product(inst)
            assert val == best == inst.value(alloc)
            assert alloc.owners() == owners

    def test_or_route_agrees(self, rng):
        for _ in range(100):
            inst = random_instance(rng)
            assert optimal_welfare(inst) == optimal_allocate(inst)[1]

    def test_all_optima_listed(self, rng):
        for _ in range(60):
            inst = random_instance(rng)
            allocs, val = optimal_allocations(inst)
            assert allocs[0] == optimal_allocate(inst)[0]
            assert all(inst.value(a) == val for a in allocs)
            count = 0
            for owners in itertools.product(range(inst.n), repeat=inst.m):
                if inst.value(Allocation.from_owners(owners, inst.n)) == val:
                    count += 1
            assert count == len(allocs)

    def test_ties_go_to_lowest_assignment(self):
        inst = AuctionInstance([AdditiveValuation([1, 1]), AdditiveValuation([1, 1])])
        assert optimal_allocate(inst)[0].owners() == (0, 0)

    def test_too_large(self):
        inst = AuctionInstance([AdditiveValuation([1] * 12)] * 4)
        with pytest.raises(InstanceTooLarge):
            optimal_allocate(inst)

    def test_by_classes_agrees(self, rng):
        for _ in range(200):
            inst = random_instance(rng)
            alloc, val = optimal_allocate_by_classes(inst)
            assert val == optimal_allocate(inst)[1] == inst.value(alloc)

    def test_item_classes(self):
        inst = AuctionInstance([AdditiveValuation([1, 2, 1, 2]), BudgetedAdditiveValuation([3, 4, 3, 4], 5)])
        assert item_classes(inst) == [(0, 2), (1, 3)]
        inst = AuctionInstance([AdditiveValuation([1, 1]), TableValuation(2, [0, 1, 1, 1])])
        assert item_classes(inst) == [(0,), (1,)]
        assert item_classes(AuctionInstance([SymmetricValuation([1, 1, 0])])) == [(0, 1, 2)]

    def test_by_classes_beyond_brute_force(self):
        inst = AuctionInstance([UnitDemandValuation([3] * 25), SymmetricValuation([2] * 10 + [0] * 15)])
        alloc, val = optimal_allocate_by_classes(inst)
        assert val == 3 + 2 * 10 and inst.value(alloc) == val


class TestKnapsack:
    @pytest.mark.parametrize("a,t,value", [([1, 2, 3], 3, 9), ([2, 2], 3, 6), ([5], 5, 10)])
    def test_examples(self, a, t, value):
        assert optimal_allocate(knapsack_instance(a, t))[1] == value

    def test_law_small_ordered(self):
        for m in range(1, 5):
            for a in itertools.product(range(1, 5), repeat=m):
                for t in range(1, sum(a) + 1):
                    val = optimal_allocate(knapsack_instance(list(a), t))[1]
                    assert (val == sum(a) + t) == subset_sum(a, t)
                    assert val <= sum(a) + t

    @pytest.mark.parametrize("a,t", [([], 1), ([0, 1], 1), ([1, 2], 0), ([1, 2], 4), ([1.0], 1)])
    def test_input_errors(self, a, t):
        with pytest.raises(ValueError):
            knapsack_instance(a, t)


class TestGreedy:
    def test_sharpness_default_order(self):
        inst = greedy_sharpness_pair()
        alloc = greedy_allocate(inst)
        assert inst.value(alloc) == 1 and optimal_allocate(inst)[1] == 2

    def test_heuristic_reaches_optimum_on_sharpness(self):
        inst = greedy_sharpness_pair()
        assert greedy_order_heuristic(inst, [ItemSet.empty(2)] * 2) == 1
        assert inst.value(greedy_allocate(inst, greedy_order_heuristic)) == 2

    def test_single_free_item(self):
        inst = greedy_sharpness_pair()
        assert greedy_order_heuristic(inst, [ItemSet.of(2, [0]), ItemSet.empty(2)]) == 1
        with pytest.raises(ValueError):
            greedy_order_heuristic(inst, [ItemSet.full(2), ItemSet.empty(2)])

    def test_explicit_order(self):
        inst = greedy_sharpness_pair()
        assert inst.value(greedy_allocate(inst, [1, 0])) == 2
        with pytest.raises(ValueError):
            greedy_allocate(inst, [0, 0])

    def test_bad_rule(self):
        inst = greedy_sharpness_pair()
        with pytest.raises(ValueError):
            greedy_allocate(inst, lambda inst, state: 0)

    def test_half_on_submodular(self, rng):
        for _ in range(150):
            inst = random_instance(rng, random_sm, m_max=5, n_max=3)
            opt = optimal_allocate(inst)[1]
            for order in (None, greedy_order_heuristic, most_valuable_first):
                assert 2 * inst.value(greedy_allocate(inst, order)) >= opt

    def test_a_submodular_bound(self, rng):
        for a in (Fraction(3, 2), Fraction(2), Fraction(3)):
            for _ in range(40):
                m = rng.randint(1, 5)
                inst = AuctionInstance([random_a_submodular(rng, m, a) for _ in range(rng.randint(1, 3))])
                assert (1 + a) * inst.value(greedy_allocate(inst)) >= optimal_allocate(inst)[1]


class TestKelsoCrawford:
    def test_two_bidders_one_item(self):
        inst = AuctionInstance([AdditiveValuation([10]), AdditiveValuation([6])])
        res = kelso_crawford(inst, 1)
        assert res.prices == PriceVector([6])
        assert res.allocation.owners() == (0,)
        assert res.welfare == 10 and res.rounds == 6

    def test_single_bidder(self):
        inst = AuctionInstance([BudgetedAdditiveValuation([1, 2, 3], 4)])
        res = kelso_crawford(inst, Fraction(1, 3))
        assert res.prices == PriceVector([0, 0, 0]) and res.allocation.bundles[0] == ItemSet.full(3)

    def test_epsilon_positive(self):
        with pytest.raises(ValueError):
            kelso_crawford(greedy_sharpness_pair(), 0)

    def test_round_cap(self):
        inst = AuctionInstance([AdditiveValuation([10]), AdditiveValuation([10])])
        with pytest.raises(NonTermination):
            kelso_crawford(inst, 1, max_rounds=3)

    def test_gap_and_monotone_prices(self, rng):
        for _ in range(40):
            inst = random_instance(rng, random_oxs, m_max=4, n_max=3)
            eps = Fraction(1, 20)
            res = kelso_crawford(inst, eps)
            opt = optimal_allocate(inst)[1]
            assert opt - res.welfare <= inst.n * inst.m * eps
            assert res.welfare == inst.value(res.allocation)
            for p, q in zip(res.price_history, res.price_history[1:]):
                assert all(a <= b for a, b in zip(p, q))

    def test_shrinking_epsilon_reaches_equilibrium(self, rng):
        for _ in range(15):
            inst = random_instance(rng, random_oxs, m_max=3, n_max=3)
            eps = Fraction(1)
            for _ in range(12):
                res = kelso_crawford(inst, eps)
                if verify_walrasian(inst, WalrasianCertificate(res.prices, res.allocation)):
                    break
                eps /= 2
            else:
                pytest.fail("no equilibrium reached")
            assert res.welfare == optimal_allocate(inst)[1]


class TestMatching:
    def test_unit_demand_pair(self):
        inst = AuctionInstance([UnitDemandValuation([5, 3]), UnitDemandValuation([4, 4])])
        alloc, val = oxs_matching_allocate(inst)
        assert val == 9 and inst.value(alloc) == 9

    def test_single_clause(self):
        inst = AuctionInstance([expression_valuation(Bid(0, 7), 1)])
        assert oxs_matching_allocate(inst)[1] == 7

    def test_matches_optimum(self, rng):
        for _ in range(80):
            inst = random_instance(rng, random_oxs)
            alloc, val = oxs_matching_allocate(inst)
            assert val == optimal_allocate(inst)[1] == inst.value(alloc)

    def test_rejects_non_oxs(self):
        with pytest.raises(NotOxsExpression):
            oxs_matching_allocate(AuctionInstance([budget_limited_three_items()]))
        e = Xor((Or((Bid(0, 1), Bid(1, 1))), Bid(0, 3)))
        with pytest.raises(NotOxsExpression):
            oxs_matching_allocate(AuctionInstance([expression_valuation(e, 2)]))


class TestWalrasian:
    def test_single_bidder_zero_prices(self):
        inst = AuctionInstance([AdditiveValuation([1, 2])])
        cert = WalrasianCertificate(PriceVector([0, 0]), Allocation.from_owners([0, 0], 1))
        assert verify_walrasian(inst, cert)
        found = exists_walrasian(inst)
        assert found.prices == PriceVector([0, 0])

    def test_wrong_certificate(self):
        inst = AuctionInstance([budget_limited_three_items(), UnitDemandValuation([0, 0, 1])])
        cert = WalrasianCertificate(PriceVector([0, 0, 0]), Allocation.from_owners([1, 1, 1], 2))
        res = verify_walrasian(inst, cert)
        assert not res and res.witness[0] == 0

    def test_dimensions(self):
        inst = AuctionInstance([AdditiveValuation([1, 2])])
        with pytest.raises(DimensionMismatch):
            verify_walrasian(inst, WalrasianCertificate(PriceVector([0]), Allocation.from_owners([0, 0], 1)))

    def test_gs_always_has_equilibrium(self, rng):
        for _ in range(60):
            inst = random_instance(rng, random_gs, m_max=4, n_max=3)
            cert = exists_walrasian(inst)
            assert cert is not None and verify_walrasian(inst, cert)

    def test_verified_equilibria_are_optimal(self, rng):
        for _ in range(60):
            inst = random_instance(rng)
            cert = exists_walrasian(inst)
            if cert is not None:
                assert verify_walrasian(inst, cert)
                assert inst.value(cert.allocation) == optimal_allocate(inst)[1]

    def test_supporting_prices_for_suboptimal_is_none(self):
        inst = AuctionInstance([AdditiveValuation([10]), AdditiveValuation([6])])
        assert supporting_prices(inst, Allocation.from_owners([1], 2)) is None
        p = supporting_prices(inst, Allocation.from_owners([0], 2))
        assert 6 <= p[0] <= 10

    def test_budget_limited_nonexistence(self):
        inst = AuctionInstance([
            budget_limited_three_items(), UnitDemandValuation([0, 0, 1]), UnitDemandValuation([1, 1, 0]),
        ])
        assert not is_gross_substitutes(inst.valuations[0])
        assert exists_walrasian(inst) is None
