"""Small worked examples with known answers.

Each constructor returns the valuations of one example; :data:`FIXTURES`
pairs every example with the facts it must reproduce, and
:func:`run_fixtures` recomputes them all.  Items are numbered from 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from .algebra import Bid, or_, or_of, xor_of, expression_valuation
from .allocation import (
    AuctionInstance,
    greedy_allocate,
    greedy_order_heuristic,
    kelso_crawford,
    knapsack_instance,
    optimal_allocate,
    oxs_matching_allocate,
)
from .core import (
    AdditiveValuation,
    BudgetedAdditiveValuation,
    ItemSet,
    PriceVector,
    SingletonValuation,
    SymmetricValuation,
    TableValuation,
    UnitDemandValuation,
    Valuation,
    demand_set,
    marginal,
    single_minded,
)
from .hierarchy import (
    is_complement_free,
    is_downward_sloping,
    is_gross_substitutes,
    is_submodular,
    is_xos,
    single_improvement_witness,
)
from .mechanisms import agents_substitutes_check, false_name_analysis, greedy_truthfulness_fixture, vcg


def budget_limited_three_items() -> BudgetedAdditiveValuation:
    """Prices 2, 2, 4 under a budget of 4: submodular but not gross substitutes."""
    return BudgetedAdditiveValuation([2, 2, 4], 4)


def symmetric_two_then_flat() -> SymmetricValuation:
    """Symmetric with marginals 2, 0, 1: XOS but not submodular."""
    return SymmetricValuation([2, 0, 1])


def symmetric_two_then_flat_as_bids() -> Valuation:
    """The same valuation written as singleton XOR clauses plus an OR of unit bids."""
    singles = [Bid(i, 2) for i in range(3)]
    units = or_of(Bid(i, 1) for i in range(3))
    return expression_valuation(xor_of(singles + [units]), 3)


def sizes_two_three_five() -> SymmetricValuation:
    """v = 2, 3, 5 on bundles of size 1, 2, 3: complement-free but not XOS."""
    return SymmetricValuation([2, 1, 2])


def four_items_paired_discount() -> TableValuation:
    """Singletons 10, {0,2} and {1,3} worth 15, every other larger bundle 19."""
    def value(mask: int) -> int:
        size = bin(mask).count("1")
        if size == 0:
            return 0
        if size == 1:
            return 10
        return 15 if mask in (0b0101, 0b1010) else 19

    return TableValuation(4, [value(mask) for mask in range(16)])


def budgeted_or_additive() -> tuple[BudgetedAdditiveValuation, AdditiveValuation]:
    """Budgeted (3, 5, 3 | 6) and additive (1, 2, 0); their OR is not submodular."""
    return BudgetedAdditiveValuation([3, 5, 3], 6), AdditiveValuation([1, 2, 0])


def three_colour_auction() -> tuple[Valuation, Valuation, Valuation]:
    """Red and Blue from :func:`budgeted_or_additive` plus Green additive (2, 0, 5)."""
    red, blue = budgeted_or_additive()
    return red, blue, AdditiveValuation([2, 0, 5])


def green_identities() -> tuple[SingletonValuation, SingletonValuation]:
    return SingletonValuation(3, 0, 2), SingletonValuation(3, 2, 5)


def pair_bidders() -> tuple[TableValuation, TableValuation]:
    """Two bidders who only value the pair, at 6 and at 5."""
    return single_minded(2, [0, 1], 6), single_minded(2, [0, 1], 5)


def greedy_sharpness_pair() -> AuctionInstance:
    """Greedy in index order reaches only half the optimum here."""
    return AuctionInstance([TableValuation(2, [0, 1, 1, 1]), TableValuation(2, [0, 1, 0, 1])])


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FixtureCheck:
    label: str
    expected: Any
    actual: Any

    @property
    def passed(self) -> bool:
        return self.expected == self.actual


@dataclass(frozen=True)
class FixtureResult:
    name: str
    description: str
    checks: tuple[FixtureCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _s(m: int, *items: int) -> ItemSet:
    return ItemSet.of(m, items)


def _budget_limited():
    v = budget_limited_three_items()
    low, high = PriceVector([0, 1, 2]), PriceVector([2, 1, 2])
    return [
        FixtureCheck("submodular", True, is_submodular(v).holds),
        FixtureCheck("gross substitutes", False, is_gross_substitutes(v).holds),
        FixtureCheck("demand at (0,1,2)", [_s(3, 0, 1)], demand_set(v, low)),
        FixtureCheck("demand after raising item 0 to 2", [_s(3, 2)], demand_set(v, high)),
        FixtureCheck("single improvement fails somewhere", True, single_improvement_witness(v) is not None),
    ]


def _xos_not_sm():
    v = symmetric_two_then_flat()
    bids = symmetric_two_then_flat_as_bids()
    return [
        FixtureCheck("XOS", True, is_xos(v).holds),
        FixtureCheck("submodular", False, is_submodular(v).holds),
        FixtureCheck("downward sloping", False, is_downward_sloping(v)),
        FixtureCheck("bid expression equals the table", v.table(), bids.table()),
    ]


def _cf_not_xos():
    v = sizes_two_three_five()
    w = marginal(v, _s(3, 0))
    return [
        FixtureCheck("complement-free", True, is_complement_free(v).holds),
        FixtureCheck("XOS", False, is_xos(v).holds),
        FixtureCheck("marginal values by size", [0, 1, 1, 3], [w.value(mask) for mask in range(4)]),
        FixtureCheck("marginal complement-free", False, is_complement_free(w).holds),
    ]


def _four_items():
    v = four_items_paired_discount()
    return [
        FixtureCheck("gross substitutes (exchange test)", True, is_gross_substitutes(v).holds),
        FixtureCheck("no single improvement violation", None, single_improvement_witness(v)),
    ]


def _or_not_sm():
    u, w = budgeted_or_additive()
    v = or_(u, w)
    m = 3
    pair_sum = v(_s(m, 0, 1)) + v(_s(m, 1, 2))
    union_plus_meet = v(_s(m, 0, 1, 2)) + v(_s(m, 1))
    return [
        FixtureCheck("u submodular", True, is_submodular(u).holds),
        FixtureCheck("w submodular", True, is_submodular(w).holds),
        FixtureCheck("v({0,1}) + v({1,2})", Fraction(12), pair_sum),
        FixtureCheck("v(X) + v({1})", Fraction(13), union_plus_meet),
        FixtureCheck("u gets {0,2}, w gets {1} on X", [_s(m, 0, 2), _s(m, 1)], v.partition(_s(m, 0, 1, 2))),
        FixtureCheck("OR submodular", False, is_submodular(v).holds),
    ]


def _false_name():
    red, blue, green = three_colour_auction()
    inst = AuctionInstance([red, blue, green])
    alloc, welfare = optimal_allocate(inst)
    outcome = vcg(inst)
    g1, g2 = green_identities()
    report = false_name_analysis([red, blue], [g1, g2])
    u = or_(red, blue)
    coalition = agents_substitutes_check(AuctionInstance([red, blue, g1, g2]), {2, 3})
    return [
        FixtureCheck("optimal welfare", Fraction(12), welfare),
        FixtureCheck("Red gets {1}, Green gets {0,2}", (_s(3, 1), _s(3), _s(3, 0, 2)), alloc.bundles),
        FixtureCheck("Red v Blue on X, pairs", [8, 6, 6, 6], [u(_s(3, 0, 1, 2)), u(_s(3, 0, 1)), u(_s(3, 0, 2)), u(_s(3, 1, 2))]),
        FixtureCheck("Green pays", Fraction(3), outcome.payments[2]),
        FixtureCheck("split payments", (Fraction(1), Fraction(1)), report.split_payments),
        FixtureCheck("split profitable", True, report.profitable),
        FixtureCheck("opponents' OR submodular", False, report.others_combined_submodular),
        FixtureCheck("welfare with/without coalition/G1/G2", (12, 8, 11, 8), (
            coalition.welfare_all, coalition.welfare_without_coalition,
            coalition.welfare_without_each[2], coalition.welfare_without_each[3])),
        FixtureCheck("agents are substitutes", False, coalition.holds),
    ]


def _pair_bids():
    six, five = pair_bidders()
    outcome = vcg(AuctionInstance([six, five]))
    report = false_name_analysis([five], [SingletonValuation(2, 0, 4), SingletonValuation(2, 1, 4)])
    return [
        FixtureCheck("pair winner pays", Fraction(5), outcome.payments[0]),
        FixtureCheck("honest payment", Fraction(5), report.honest_payment),
        FixtureCheck("split total", Fraction(2), report.total_split),
        FixtureCheck("split profitable", True, report.profitable),
    ]


def _sharpness():
    inst = greedy_sharpness_pair()
    greedy = inst.value(greedy_allocate(inst))
    best = optimal_allocate(inst)[1]
    gap_first = greedy_order_heuristic(inst, [ItemSet.empty(2), ItemSet.empty(2)])
    return [
        FixtureCheck("greedy value", Fraction(1), greedy),
        FixtureCheck("optimal value", Fraction(2), best),
        FixtureCheck("ratio", Fraction(1, 2), greedy / best),
        FixtureCheck("gap heuristic picks item 1 first", 1, gap_first),
        FixtureCheck("gap heuristic value", Fraction(2), inst.value(greedy_allocate(inst, greedy_order_heuristic))),
    ]


def _truthfulness():
    r = greedy_truthfulness_fixture()
    m = 2
    return [
        FixtureCheck("Red v Green1", (_s(m), _s(m, 0, 1)), r.red_vs_green1.bundles),
        FixtureCheck("Red v Green2", (_s(m, 0), _s(m, 1)), r.red_vs_green2.bundles),
        FixtureCheck("Red v Green2, item 1 first", (_s(m, 0), _s(m, 1)), r.red_vs_green2_other_order.bundles),
        FixtureCheck("payment constraints feasible", False, r.feasible),
    ]


def _knapsack():
    return [
        FixtureCheck("a=(1,2,3), t=3", Fraction(9), optimal_allocate(knapsack_instance([1, 2, 3], 3))[1]),
        FixtureCheck("a=(2,2), t=3", Fraction(6), optimal_allocate(knapsack_instance([2, 2], 3))[1]),
        FixtureCheck("a=(5), t=5", Fraction(10), optimal_allocate(knapsack_instance([5], 5))[1]),
    ]


def _ascending():
    inst = AuctionInstance([AdditiveValuation([10]), AdditiveValuation([6])])
    res = kelso_crawford(inst, 1)
    return [
        FixtureCheck("final price", PriceVector([6]), res.prices),
        FixtureCheck("bundles", (_s(1, 0), _s(1)), res.allocation.bundles),
        FixtureCheck("welfare", Fraction(10), res.welfare),
    ]


def _matching():
    inst = AuctionInstance([UnitDemandValuation([5, 3]), UnitDemandValuation([4, 4])])
    alloc, value = oxs_matching_allocate(inst)
    return [
        FixtureCheck("matching value", Fraction(9), value),
        FixtureCheck("equals brute force", optimal_allocate(inst)[1], value),
    ]


FIXTURES: dict[str, tuple[str, Callable[[], list[FixtureCheck]]]] = {
    "budget_limited_three_items": ("budget-limited additive: SM, not GS", _budget_limited),
    "symmetric_two_then_flat": ("symmetric 2,0,1: XOS, not SM", _xos_not_sm),
    "sizes_two_three_five": ("symmetric 2,3,5: CF, not XOS; marginal not CF", _cf_not_xos),
    "four_items_paired_discount": ("four items with two discounted pairs: GS", _four_items),
    "budgeted_or_additive": ("OR of two submodular valuations, not SM", _or_not_sm),
    "three_colour_false_name": ("profitable false-name split among submodular bidders", _false_name),
    "pair_bid_false_name": ("pair bids 6 and 5, split into 4 + 4", _pair_bids),
    "greedy_sharpness_pair": ("greedy ratio exactly 1/2", _sharpness),
    "greedy_truthfulness": ("no payments make greedy truthful", _truthfulness),
    "knapsack_reduction": ("two-bidder knapsack instances", _knapsack),
    "ascending_single_item": ("ascending prices, one item, values 10 and 6", _ascending),
    "unit_demand_matching": ("unit-demand bidders via matching", _matching),
}


def run_fixtures(names=None) -> list[FixtureResult]:
    chosen = list(FIXTURES) if names is None else list(names)
    out = []
    for name in chosen:
        description, build = FIXTURES[name]
        out.append(FixtureResult(name, description, tuple(build())))
    return out
