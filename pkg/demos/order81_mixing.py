"""
Abelian types mix at order 81
=============================

A Galois group C9 x C3 x C3 admits Hopf Galois structures of type C3^4, and
the other way round.  The search below looks for the regular subgroups.
It takes a minute or two.
"""

from hopfgalois.abelian import AbelianType
from hopfgalois.brace import lemma_order_check
from hopfgalois.realizability import realizability_report

pairs = [((2, 1, 1), (2, 2)), ((2, 1, 1), (1, 1, 1, 1)), ((1, 1, 1, 1), (2, 1, 1))]
for g, n in pairs:
    G, N = AbelianType(3, g), AbelianType(3, n)
    rep = realizability_report(G, N)
    print(f"({G}, {N}) realizable: {rep['realizable']}, checks {rep['witness_checks']}")

# The order equivalence behind the p > n result fails here (p = 3 < n = 4).
from hopfgalois.realizability import SearchSpec, search_regular

w = search_regular(SearchSpec(AbelianType(3, (1, 1, 1, 1)), AbelianType(3, (2, 1, 1)))).witness
print("order equivalence holds:", lemma_order_check(w).passed)
