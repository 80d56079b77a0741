"""Exact welfare for knapsack-style auctions beyond brute force.

Items with equal prices are interchangeable, so the class-count allocator
only enumerates how many of each price level each bidder takes.

Run:  python demos/large_knapsack.py
"""

import time

from subauct import knapsack_instance, optimal_allocate_by_classes

for a, t in [([1] * 30, 17), ([2] * 12 + [3] * 10 + [7] * 4, 41), ([4] * 20 + [6] * 20, 70), ([4] * 20 + [6] * 20, 71)]:
    start = time.perf_counter()
    alloc, value = optimal_allocate_by_classes(knapsack_instance(a, t))
    f = sum(a)
    verdict = "subset sum solvable" if value == f + t else "no subset sums to t"
    print(f"m={len(a):3} f={f:4} t={t:3} optimum {value} ({verdict}) in {time.perf_counter() - start:.3f}s")
