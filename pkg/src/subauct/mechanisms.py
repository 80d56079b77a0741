"""VCG payments, false-name bidding and the greedy-truthfulness counterexample."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import or_
from .allocation import (
    Allocation,
    AuctionInstance,
    greedy_allocate,
    most_valuable_first,
    optimal_allocate,
)
from .core import ItemSet, TableValuation, Valuation, restrict
from .hierarchy import is_submodular
from .lp import find_feasible


@dataclass(frozen=True)
class VcgOutcome:
    """Optimal allocation with externality payments.

    ``opponent_values[i]`` is (u(X), u(X - S_i)) for u the OR of every
    bidder except i, and ``opponent_splits[i]`` the corresponding optimal
    splits among those bidders (indexed by original bidder number).
    """

    allocation: Allocation
    welfare: Fraction
    payments: tuple[Fraction, ...]
    opponent_values: tuple[tuple[Fraction, Fraction], ...]
    opponent_splits: tuple[tuple[dict[int, ItemSet], dict[int, ItemSet]], ...] = field(repr=False)

    @property
    def total_payment(self) -> Fraction:
        return sum(self.payments, Fraction(0))


def vcg(inst: AuctionInstance) -> VcgOutcome:
    alloc, welfare = optimal_allocate(inst)
    m, full = inst.m, (1 << inst.m) - 1
    payments, values, splits = [], [], []
    for i, bundle in enumerate(alloc.bundles):
        others = [j for j in range(inst.n) if j != i]
        if not others:
            payments.append(Fraction(0))
            values.append((Fraction(0), Fraction(0)))
            splits.append(({}, {}))
            continue
        u = or_(*(inst.valuations[j] for j in others))
        rest = full & ~bundle.mask
        with_all, without = u.value(full), u.value(rest)
        payments.append(with_all - without)
        values.append((with_all, without))
        splits.append(tuple(
            {j: ItemSet(m, t) for j, t in zip(others, u.partition_masks(mask))} for mask in (full, rest)
        ))
    return VcgOutcome(alloc, welfare, tuple(payments), tuple(values), tuple(splits))


def _welfare(valuations: Sequence[Valuation], keep_mask: int, m: int) -> Fraction:
    """Brute-force optimal welfare of ``valuations`` over the items in keep_mask."""
    if not valuations or not keep_mask:
        return Fraction(0)
    keep = ItemSet(m, keep_mask)
    sub = [restrict(v, keep) for v in valuations] if keep_mask != (1 << m) - 1 else list(valuations)
    return optimal_allocate(AuctionInstance(sub))[1]


def vcg_payments_by_welfare(inst: AuctionInstance, alloc: Allocation) -> tuple[Fraction, ...]:
    """VCG payments from leave-one-out brute-force optima on the reduced item set.

    Independent of the OR-combination route used by :func:`vcg`.
    """
    full = (1 << inst.m) - 1
    out = []
    for i, bundle in enumerate(alloc.bundles):
        others = [v for j, v in enumerate(inst.valuations) if j != i]
        out.append(_welfare(others, full, inst.m) - _welfare(others, full & ~bundle.mask, inst.m))
    return tuple(out)


@dataclass(frozen=True)
class FalseNameReport:
    honest_payment: Fraction
    split_payments: tuple[Fraction, ...]
    total_split: Fraction
    honest_bundle: ItemSet
    split_bundles: tuple[ItemSet, ...]
    honest_utility: Fraction
    split_utility: Fraction
    profitable: bool
    others_combined_submodular: bool


def false_name_analysis(others: Sequence[Valuation], split: Sequence[Valuation]) -> FalseNameReport:
    """Compare bidding the OR of ``split`` under one name with bidding each part separately.

    Utilities are measured with the true valuation OR(split), so
    ``profitable`` means the identities together end up strictly better
    off, whatever bundles the tie-break hands them.
    """
    others, split = list(others), list(split)
    if not split:
        raise ValueError("split needs at least one identity")
    combined = or_(*split) if len(split) > 1 else split[0]
    k = len(others)
    honest = vcg(AuctionInstance(others + [combined]))
    parted = vcg(AuctionInstance(others + split))
    honest_bundle = honest.allocation.bundles[k]
    split_bundles = parted.allocation.bundles[k:]
    union = 0
    for b in split_bundles:
        union |= b.mask
    split_pay = parted.payments[k:]
    total = sum(split_pay, Fraction(0))
    honest_util = combined.value(honest_bundle.mask) - honest.payments[k]
    split_util = combined.value(union) - total
    sub = bool(is_submodular(or_(*others))) if others else True
    return FalseNameReport(
        honest_payment=honest.payments[k],
        split_payments=tuple(split_pay),
        total_split=total,
        honest_bundle=honest_bundle,
        split_bundles=tuple(split_bundles),
        honest_utility=honest_util,
        split_utility=split_util,
        profitable=split_util > honest_util,
        others_combined_submodular=sub,
    )


@dataclass(frozen=True)
class AgentsSubstitutesReport:
    holds: bool
    welfare_all: Fraction
    welfare_without_coalition: Fraction
    welfare_without_each: dict[int, Fraction]

    @property
    def coalition_gain(self) -> Fraction:
        return self.welfare_all - self.welfare_without_coalition

    @property
    def summed_gains(self) -> Fraction:
        return sum((self.welfare_all - w for w in self.welfare_without_each.values()), Fraction(0))


def agents_substitutes_check(inst: AuctionInstance, coalition) -> AgentsSubstitutesReport:
    """w(T) - w(T - S) >= sum over k in S of (w(T) - w(T - k)), w = optimal welfare."""
    S = sorted(set(coalition))
    if any(not 0 <= k < inst.n for k in S):
        raise ValueError(f"coalition {S} names unknown bidders")
    full = (1 << inst.m) - 1

    def w(excluded) -> Fraction:
        return _welfare([v for j, v in enumerate(inst.valuations) if j not in excluded], full, inst.m)

    total = w(set())
    without_s = w(set(S))
    each = {k: w({k}) for k in S}
    summed = sum((total - x for x in each.values()), Fraction(0))
    return AgentsSubstitutesReport(total - without_s >= summed, total, without_s, each)


@dataclass(frozen=True)
class TruthfulnessReport:
    """Greedy runs against Red for two Green types, and the payment constraints.

    With p the charge for {a, b} and q the charge for {b}, truthfulness
    requires 18 - p >= 10 - q (Green1 must not prefer posing as Green2)
    and 10 - q >= 19 - p (Green2 must not prefer posing as Green1).
    """

    red_vs_green1: Allocation
    red_vs_green2: Allocation
    red_vs_green2_other_order: Allocation
    inequalities: tuple[str, ...]
    feasible: bool


def truthfulness_bidders() -> tuple[Valuation, Valuation, Valuation]:
    """Red, Green1 and Green2 over items a=0, b=1."""
    red = TableValuation(2, [0, 10, 6, 11])
    green1 = TableValuation(2, [0, 11, 10, 18])
    green2 = TableValuation(2, [0, 9, 10, 19])
    return red, green1, green2


def greedy_truthfulness_fixture() -> TruthfulnessReport:
    red, green1, green2 = truthfulness_bidders()
    first = greedy_allocate(AuctionInstance([red, green1]), most_valuable_first)
    second = greedy_allocate(AuctionInstance([red, green2]), most_valuable_first)
    second_rev = greedy_allocate(AuctionInstance([red, green2]), [1, 0])
    # p, q are free: write each as a difference of nonnegative variables (p+, p-, q+, q-).
    # 18 - p >= 10 - q   ->   p - q <= 8
    # 10 - q >= 19 - p   ->  -p + q <= -9
    rows = [[1, -1, -1, 1], [-1, 1, 1, -1]]
    feasible = find_feasible(4, rows, [8, -9]) is not None
    return TruthfulnessReport(
        red_vs_green1=first,
        red_vs_green2=second,
        red_vs_green2_other_order=second_rev,
        inequalities=("18 - p >= 10 - q", "10 - q >= 19 - p"),
        feasible=feasible,
    )


__all__ = [
    "VcgOutcome", "vcg", "vcg_payments_by_welfare", "FalseNameReport", "false_name_analysis",
    "AgentsSubstitutesReport", "agents_substitutes_check", "TruthfulnessReport",
    "truthfulness_bidders", "greedy_truthfulness_fixture",
]
