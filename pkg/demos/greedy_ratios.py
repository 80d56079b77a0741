"""Distribution of greedy/optimal ratios on random submodular auctions.

Run:  python demos/greedy_ratios.py [count] [seed]
"""

import random
import sys
import time
from collections import Counter
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from generators import random_sm  # noqa: E402
from subauct import (  # noqa: E402
    AuctionInstance,
    greedy_allocate,
    greedy_order_heuristic,
    optimal_allocate,
)

count = int(sys.argv[1]) if len(sys.argv) > 1 else 300
rng = random.Random(int(sys.argv[2]) if len(sys.argv) > 2 else 7)

buckets = {"index order": Counter(), "largest gap first": Counter()}
worst = {k: Fraction(1) for k in buckets}
start = time.perf_counter()
for _ in range(count):
    m, n = rng.randint(2, 7), rng.randint(2, 4)
    inst = AuctionInstance([random_sm(rng, m) for _ in range(n)])
    opt = optimal_allocate(inst)[1]
    if opt == 0:
        continue
    for name, order in (("index order", None), ("largest gap first", greedy_order_heuristic)):
        r = inst.value(greedy_allocate(inst, order)) / opt
        worst[name] = min(worst[name], r)
        buckets[name][min(int(r * 10), 9)] += 1

print(f"{count} instances in {time.perf_counter() - start:.1f}s")
for name, hist in buckets.items():
    print(f"\n{name}: worst ratio {worst[name]} ({float(worst[name]):.3f})")
    for b in range(5, 10):
        lo = b / 10
        print(f"  [{lo:.1f}, {lo + 0.1:.1f}{']' if b == 9 else ')'} {'#' * (hist[b] // 4)} {hist[b]}")
