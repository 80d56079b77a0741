from fractions import Fraction

import pytest

from generators import random_gs, random_mixed, random_sm
from subauct import (
    AuctionInstance,
    ItemSet,
    agents_substitutes_check,
    false_name_analysis,
    greedy_truthfulness_fixture,
    optimal_allocate,
    or_,
    vcg,
    vcg_payments_by_welfare,
)
from subauct.fixtures import (
    budgeted_or_additive,
    green_identities,
    pair_bidders,
    three_colour_auction,
)
from subauct.core import SingletonValuation, single_minded
from subauct.mechanisms import truthfulness_bidders


def random_ensemble(rng, make, m, k):
    return [make(rng, m) for _ in range(k)]


class TestVcg:
    def test_pair_bidders(self):
        out = vcg(AuctionInstance(pair_bidders()))
        assert out.allocation.bundles[0] == ItemSet.full(2)
        assert out.payments == (5, 0)
        assert out.opponent_values[0] == (5, 0)

    def test_single_bidder_pays_nothing(self):
        out = vcg(AuctionInstance([budgeted_or_additive()[0]]))
        assert out.payments == (0,) and out.welfare == 6

    def test_green_pays_three(self):
        out = vcg(AuctionInstance(three_colour_auction()))
        assert out.welfare == 12
        assert out.payments[2] == 3
        assert out.opponent_values[2] == (8, 5)

    def test_opponent_splits_realize_values(self):
        inst = AuctionInstance(three_colour_auction())
        out = vcg(inst)
        for i, ((full, rest), (s_full, s_rest)) in enumerate(zip(out.opponent_values, out.opponent_splits)):
            assert sum((inst.valuations[j](b) for j, b in s_full.items()), Fraction(0)) == full
            assert sum((inst.valuations[j](b) for j, b in s_rest.items()), Fraction(0)) == rest
            assert all(not (b & out.allocation.bundles[i]) for b in s_rest.values())

    def test_routes_agree_and_rational(self, rng):
        for _ in range(100):
            m = rng.randint(1, 4)
            inst = AuctionInstance(random_ensemble(rng, random_mixed, m, rng.randint(1, 3)))
            out = vcg(inst)
            assert out.payments == vcg_payments_by_welfare(inst, out.allocation)
            for v, b, p in zip(inst.valuations, out.allocation.bundles, out.payments):
                assert 0 <= p <= v(b)
            assert out.welfare == optimal_allocate(inst)[1]


class TestFalseName:
    def test_pair_split(self):
        others = [pair_bidders()[1]]
        split = [SingletonValuation(2, 0, 4), SingletonValuation(2, 1, 4)]
        r = false_name_analysis(others, split)
        assert r.honest_payment == 5
        assert r.split_payments == (1, 1) and r.total_split == 2
        assert r.profitable

    def test_three_colour_split(self):
        r = false_name_analysis(list(budgeted_or_additive()), list(green_identities()))
        assert r.honest_payment == 3
        assert r.split_payments == (1, 1) and r.total_split == 2
        assert r.profitable and not r.others_combined_submodular
        assert r.honest_bundle == ItemSet.of(3, [0, 2])
        assert r.split_bundles == (ItemSet.of(3, [0]), ItemSet.of(3, [2]))

    def test_split_needed(self):
        with pytest.raises(ValueError):
            false_name_analysis([], [])

    def test_never_profitable_with_submodular_others(self, rng):
        checked = 0
        while checked < 120:
            m = rng.randint(1, 4)
            make = rng.choice([random_sm, random_gs, random_mixed])
            others = random_ensemble(rng, make, m, rng.randint(1, 2))
            split = random_ensemble(rng, random_mixed, m, 2)
            r = false_name_analysis(others, split)
            if r.others_combined_submodular:
                checked += 1
                assert not r.profitable
                if r.honest_bundle.mask == _union(r.split_bundles):
                    assert r.total_split >= r.honest_payment

    def test_gs_others_never_profitable(self, rng):
        for _ in range(80):
            m = rng.randint(1, 4)
            r = false_name_analysis(random_ensemble(rng, random_gs, m, rng.randint(1, 3)),
                                    random_ensemble(rng, random_mixed, m, rng.randint(2, 3)))
            assert r.others_combined_submodular and not r.profitable


def _union(bundles):
    out = 0
    for b in bundles:
        out |= b.mask
    return out


class TestAgentsSubstitutes:
    def test_three_colour(self):
        red, blue = budgeted_or_additive()
        g1, g2 = green_identities()
        r = agents_substitutes_check(AuctionInstance([red, blue, g1, g2]), {2, 3})
        assert r.welfare_all == 12 and r.welfare_without_coalition == 8
        assert r.welfare_without_each == {2: 11, 3: 8}
        assert not r.holds and r.coalition_gain == 4 and r.summed_gains == 5

    def test_singleton_coalition_equality(self, rng):
        for _ in range(30):
            m = rng.randint(1, 3)
            inst = AuctionInstance(random_ensemble(rng, random_mixed, m, rng.randint(1, 3)))
            r = agents_substitutes_check(inst, {0})
            assert r.holds and r.coalition_gain == r.summed_gains

    def test_gs_coalitions_hold(self, rng):
        for _ in range(40):
            m = rng.randint(1, 3)
            n = rng.randint(2, 4)
            inst = AuctionInstance(random_ensemble(rng, random_gs, m, n))
            coalition = set(rng.sample(range(n), rng.randint(1, n)))
            assert agents_substitutes_check(inst, coalition).holds

    def test_unknown_bidder(self):
        with pytest.raises(ValueError):
            agents_substitutes_check(AuctionInstance(pair_bidders()), {5})


class TestTruthfulness:
    def test_fixture(self):
        r = greedy_truthfulness_fixture()
        assert r.red_vs_green1.bundles == (ItemSet.empty(2), ItemSet.full(2))
        assert r.red_vs_green2.bundles == (ItemSet.of(2, [0]), ItemSet.of(2, [1]))
        assert r.red_vs_green2_other_order.bundles == (ItemSet.of(2, [0]), ItemSet.of(2, [1]))
        assert not r.feasible

    def test_inequalities_contradict_by_hand(self):
        # adding the two constraints gives 28 - p - q >= 29 - p - q
        for p in range(0, 30):
            for q in range(0, 30):
                assert not (18 - p >= 10 - q and 10 - q >= 19 - p)

    def test_bidder_tables(self):
        red, g1, g2 = truthfulness_bidders()
        assert [red.value(k) for k in range(4)] == [0, 10, 6, 11]
        assert g1.value(3) == 18 and g2.value(3) == 19


def test_or_of_pair_and_singletons():
    # bidding the OR of two singletons under one name values the pair at 8
    combined = or_(*green_identities())
    assert combined.value(0b101) == 7
    assert or_(SingletonValuation(2, 0, 4), SingletonValuation(2, 1, 4)).value(3) == 8
    assert single_minded(2, [0, 1], 6).value(1) == 0
