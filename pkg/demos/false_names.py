"""Split bids under VCG: when extra identities pay off and when they cannot.

Run:  python demos/false_names.py
"""

import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from generators import random_gs, random_mixed  # noqa: E402
from subauct import agents_substitutes_check, false_name_analysis, AuctionInstance  # noqa: E402
from subauct.fixtures import budgeted_or_additive, green_identities  # noqa: E402

red, blue = budgeted_or_additive()
g1, g2 = green_identities()
rep = false_name_analysis([red, blue], [g1, g2])
print("Green bidding a:2 and c:5 under one name pays", rep.honest_payment)
print("as two identities the payments are", [str(p) for p in rep.split_payments], "total", rep.total_split)
print("others' combined valuation submodular:", rep.others_combined_submodular)
sub = agents_substitutes_check(AuctionInstance([red, blue, g1, g2]), {2, 3})
print(f"coalition gain {sub.coalition_gain} vs summed individual gains {sub.summed_gains}: holds={sub.holds}")

rng = random.Random(3)
profitable = 0
trials = 200
for _ in range(trials):
    m = rng.randint(2, 4)
    others = [random_gs(rng, m) for _ in range(rng.randint(1, 3))]
    split = [random_mixed(rng, m) for _ in range(2)]
    profitable += false_name_analysis(others, split).profitable
print(f"\nagainst gross-substitutes opponents: {profitable} profitable splits in {trials} trials")
