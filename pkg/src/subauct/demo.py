"""Narrated walk through the built-in examples (used by ``subauct demo``)."""

from __future__ import annotations

import random
from fractions import Fraction

from .algebra import or_
from .allocation import AuctionInstance, greedy_allocate, optimal_allocate
from .core import ItemSet, PriceVector, SymmetricValuation, demand_set, format_money, marginal
from .fixtures import (
    budget_limited_three_items,
    budgeted_or_additive,
    green_identities,
    sizes_two_three_five,
    symmetric_two_then_flat,
    three_colour_auction,
)
from .hierarchy import classify, is_complement_free, is_submodular
from .mechanisms import false_name_analysis, greedy_truthfulness_fixture, vcg


def _set(S: ItemSet) -> str:
    return "{" + ", ".join(map(str, S)) + "}"


def _verdicts(v) -> str:
    rep = classify(v)
    parts = [f"{k}={'yes' if ok else 'no'}" for k, ok in rep.verdicts.items()]
    a = "unbounded" if rep.minimal_a is None else format_money(rep.minimal_a)
    return ", ".join(parts) + f", minimal a={a}"


def narrate(seed: int = 0) -> str:
    out: list[str] = []
    say = out.append

    say("1. Budget-limited additive bidder: prices 2, 2, 4, budget 4.")
    v = budget_limited_three_items()
    say("   " + _verdicts(v))
    for p in ([0, 1, 2], [2, 1, 2]):
        d = demand_set(v, PriceVector(p))
        say(f"   demand at prices {p}: {', '.join(map(_set, d))}")
    say("   Raising the price of item 0 drops item 1 from the demand, so gross substitutes fails.")

    say("2. Symmetric bidder with marginals 2, 0, 1 (bundle values 2, 2, 3).")
    say("   " + _verdicts(symmetric_two_then_flat()))

    say("3. Symmetric bidder with bundle values 2, 3, 5.")
    v = sizes_two_three_five()
    say("   " + _verdicts(v))
    w = marginal(v, ItemSet.of(3, [0]))
    say(f"   given item 0 the marginal values are 1 per item and 3 for the pair; complement-free: "
        f"{'yes' if is_complement_free(w) else 'no'}")

    say("4. OR of budgeted (3, 5, 3 | 6) and additive (1, 2, 0).")
    u, add = budgeted_or_additive()
    c = or_(u, add)
    X = ItemSet.full(3)
    say(f"   v({{0,1}}) + v({{1,2}}) = {format_money(c(ItemSet.of(3, [0, 1])) + c(ItemSet.of(3, [1, 2])))}"
        f" but v(X) + v({{1}}) = {format_money(c(X) + c(ItemSet.of(3, [1])))}")
    say(f"   best split of X: {', '.join(map(_set, c.partition(X)))}; submodular: "
        f"{'yes' if is_submodular(c) else 'no'}")

    say("5. Adding Green, additive (2, 0, 5), and running VCG.")
    red, blue, green = three_colour_auction()
    out_vcg = vcg(AuctionInstance([red, blue, green]))
    say(f"   allocation {', '.join(map(_set, out_vcg.allocation.bundles))}, welfare {format_money(out_vcg.welfare)}")
    say(f"   Green pays {format_money(out_vcg.payments[2])}")
    rep = false_name_analysis([red, blue], list(green_identities()))
    say(f"   split into two identities, Green pays {' + '.join(map(format_money, rep.split_payments))}"
        f" = {format_money(rep.total_split)}; profitable: {'yes' if rep.profitable else 'no'}")

    say("6. Greedy allocation cannot be made truthful.")
    t = greedy_truthfulness_fixture()
    say(f"   Red vs Green1: {', '.join(map(_set, t.red_vs_green1.bundles))}")
    say(f"   Red vs Green2: {', '.join(map(_set, t.red_vs_green2.bundles))}")
    say(f"   payment constraints {' and '.join(t.inequalities)}: {'feasible' if t.feasible else 'infeasible'}")

    rng = random.Random(seed)
    m, n = 6, 3
    vals = [SymmetricValuation(sorted((rng.randint(0, 9) for _ in range(m)), reverse=True)) for _ in range(n)]
    inst = AuctionInstance(vals)
    g = inst.value(greedy_allocate(inst))
    best = optimal_allocate(inst)[1]
    ratio = g / best if best else Fraction(1)
    say(f"7. Random downward-sloping bidders (seed {seed}): greedy {format_money(g)}, "
        f"optimum {format_money(best)}, ratio {format_money(ratio)}")
    return "\n".join(out)
