"""
No mixing at order 125
======================

For p = 5 > n = 3 every abelian regular subgroup of the Sylow-restricted
holomorph of N has the type of N.  The censuses take a couple of minutes.
"""

from hopfgalois.abelian import AbelianType
from hopfgalois.realizability import SearchSpec, census, search_regular

for exps in [(1, 1, 1), (2, 1), (3,)]:
    rep = census(AbelianType(5, exps), braces=False)
    print(rep["ambient"]["exponents"], rep["count"], "regular;", rep["abelian_types"], "lemma failures:", rep["lemma_fail"])

amb = AbelianType(5, (1, 1, 1))
for exps in [(3,), (2, 1)]:
    res = search_regular(SearchSpec(amb, AbelianType(5, exps)))
    print(f"{AbelianType(5, exps)} in Hol({amb}): found={res.found}, exhausted={res.exhausted}, nodes={res.nodes}")
