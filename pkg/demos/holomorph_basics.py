"""
The holomorph of a small abelian group
======================================

Hol(N) is N x| Aut(N) acting on N by affine maps.  We build Hol(C9),
look at a few subgroups and see which of them act regularly.
"""

from hopfgalois.abelian import AbelianType, aut_order, endo_scalar
from hopfgalois.holomorph import (
    Holomorph,
    classify_action,
    full_holomorph,
    normalizer,
    stabilizer_of_identity,
    subgroup_closure,
    sylow_p_subgroup,
    translation_subgroup,
)

N = AbelianType(3, (2,))
hol = Holomorph(N)
print(f"|Aut({N})| = {aut_order(N)}, |Hol| = {hol.order}")

# The translations lambda(N) form a regular subgroup.
lam = translation_subgroup(hol)
print("translations:", classify_action(lam))

# Twisting the generator by multiplication by 4 gives another regular subgroup.
m4 = hol.pool_index(endo_scalar(N, 4))
twisted = subgroup_closure(hol, [(1, m4)])
print("<(1, x4)>:", twisted.order, classify_action(twisted).regular)

# The whole holomorph is transitive but not regular; its point stabilizer is Aut(N).
full = full_holomorph(hol)
print("Hol:", classify_action(full).transitive, classify_action(full).regular)
print("stabilizer of 0:", stabilizer_of_identity(full).order)

# A Sylow 3-subgroup of Hol(C9) is still transitive.
syl = sylow_p_subgroup(full)
print("Sylow 3-subgroup:", syl.order, classify_action(syl).transitive)

# lambda(N) is normal, so its normalizer is everything.
print("normalizer of lambda(N):", normalizer(lam).order)
