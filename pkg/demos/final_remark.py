"""
When the commutator subgroup is too big
=======================================

The group of order 625 with [N, N] of order 25 falls outside the
construction.  A regular copy of N still sits in Hol(C25 x C5 x C5), but its
normalizer does not have order |Hol(N)|.  The normalizer scan runs over
3.75e9 elements and takes about half an hour; pass --run to start it.
"""

import sys

from hopfgalois.construct import ConstructionInapplicable, derive_abelian_target, remark_negative_check
from hopfgalois.fixtures import RemarkGroup

N = RemarkGroup(5)
print("|[N, N]| =", len(N.derived_subgroup()))
try:
    derive_abelian_target(N)
except ConstructionInapplicable as e:
    print("construction:", e)

if "--run" in sys.argv:
    rep = remark_negative_check(5)
    rep.pop("witness", None)
    print(rep)
