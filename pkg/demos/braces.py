"""
From regular subgroups to braces
================================

Every regular subgroup R of Hol(N) is the graph of a map gamma: N -> Aut(N).
Setting x o y = x + gamma(x)(y) gives a second group law on N.
"""

from hopfgalois.abelian import AbelianType
from hopfgalois.brace import brace_from_regular, delta_profile, multiplicative_type
from hopfgalois.realizability import enumerate_regular

N = AbelianType(3, (2, 1))
subs = enumerate_regular(N).subgroups
print(f"{len(subs)} regular subgroups of {N} x| Syl_3(Aut)")

counts = {}
for s in subs:
    b = brace_from_regular(s)
    label = multiplicative_type(b).label
    counts[label] = counts.get(label, 0) + 1
for label, k in sorted(counts.items()):
    print(f"  {k:4d} with multiplicative group {label}")

# delta(x) = gamma(x) - Id is nilpotent; its index never exceeds n = 3 here.
worst = max(delta_profile(brace_from_regular(s).gamma).max_index for s in subs)
print("largest nilpotency index of delta:", worst)
