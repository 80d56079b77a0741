"""Print the class memberships of the small separating valuations.

Run:  python demos/class_separations.py
"""

from subauct import ItemSet, classify, marginal
from subauct.fixtures import (
    budget_limited_three_items,
    four_items_paired_discount,
    sizes_two_three_five,
    symmetric_two_then_flat,
)

cases = {
    "budget limited (2,2,4 | 4)": budget_limited_three_items(),
    "symmetric 2, 0, 1": symmetric_two_then_flat(),
    "sizes worth 2, 3, 5": sizes_two_three_five(),
    "four items, paired discount": four_items_paired_discount(),
    "sizes 2,3,5 given item 1": marginal(sizes_two_three_five(), ItemSet.of(3, [1])),
}

print(f"{'valuation':32} CF    XOS   SM    GS    min a")
for label, v in cases.items():
    rep = classify(v)
    flags = " ".join(f"{str(rep.verdicts[k]):5}" for k in ("CF", "XOS", "SM", "GS"))
    print(f"{label:32} {flags} {rep.minimal_a if rep.minimal_a is not None else 'unbounded'}")
    if "GS_prices" in rep.witnesses and rep.witnesses["GS_prices"] is not None:
        w = rep.witnesses["GS_prices"]
        print(f"{'':32} at prices {list(map(str, w.prices))} no single swap improves {w.A} although {w.D} is better")
