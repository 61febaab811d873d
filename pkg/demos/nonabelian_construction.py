"""
A nonabelian group inside the holomorph of an abelian one
=========================================================

For a class-2 group N with commutator subgroup of order p there is an
abelian A of the same order and a regular N' ~ N in Hol(A) whose
normalizer has order |Hol(N)|.  We walk through it for the modular
group of order 27.
"""

from hopfgalois.construct import build_phi, build_regular_nprime, derive_abelian_target, verify_nonab_theorem
from hopfgalois.fixtures import family

M27 = family(1, 3, 3)
plan = derive_abelian_target(M27)
print("A =", plan.A, "case:", plan.case, "d =", plan.d)

phis = build_phi(plan)
for i, f in enumerate(phis):
    print(f"f_{i + 1} =", f)

nprime = build_regular_nprime(plan, phis)
print("N' has order", nprime.subgroup.order)

rep = verify_nonab_theorem(M27)
print("checks:", rep["checks"])
print(f"|Norm(N')| = {rep['normalizer_order']}, |Hol(N)| = {rep['hol_order']}, |Hol(A)| = {rep['hol_A_order']}")

# The same for the five order-81 fixtures.
for fid in range(2, 6):
    r = verify_nonab_theorem(family(fid, 3, 2))
    print(f"family {fid}: A = {r['A']['exponents']}, equality {r['equality']}")
