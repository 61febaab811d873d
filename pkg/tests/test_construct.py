import pytest

from hopfgalois.abelian import AbelianType, endo_apply, order_statistics
from hopfgalois.construct import (
    ConstructionInapplicable,
    build_phi,
    build_regular_nprime,
    derive_abelian_target,
    translations_normalize,
    verify_nonab_theorem,
)
from hopfgalois.fixtures import RemarkGroup, family, family_abelian_partner
from hopfgalois.groups import iso_check
from hopfgalois.holomorph import classify_action, subgroup_closure

SMALL_FIXTURES = [(1, 3, 3), (2, 3, 2), (3, 3, 2), (4, 3, 2), (5, 3, 2)]


@pytest.fixture(scope="module")
def m27():
    plan = derive_abelian_target(family(1, 3, 3))
    return plan, build_phi(plan)


def test_m27_plan(m27):
    plan, _ = m27
    assert plan.case == "split" and plan.i0 == 0
    assert plan.A == AbelianType(3, (2, 1))
    assert plan.d == (3, 0)
    assert plan.comm[0][1] == 2 and plan.comm[1][0] == 1


def test_m27_phi_values(m27):
    plan, (f1, f2) = m27
    A = plan.A
    # f_1(alpha_2) = d alpha_2, f_2(alpha_1) = d^2 alpha_1 = alpha_1^7
    assert endo_apply(A, f1, plan.alpha(1)) == (3, 1)
    assert endo_apply(A, f2, plan.alpha(0)) == (7, 0)
    for f in (f1, f2):
        assert endo_apply(A, f, plan.d) == plan.d
        assert endo_apply(A, f, plan.alpha(0 if f is f1 else 1)) == plan.alpha(0 if f is f1 else 1)


def test_m27_nprime(m27):
    plan, phis = m27
    np_ = build_regular_nprime(plan, phis)
    assert np_.subgroup.order == 27
    assert classify_action(np_.subgroup).regular
    assert iso_check(np_.subgroup.group, plan.source.group)
    d = np_.hol.from_element(np_.generators[-1])
    assert subgroup_closure(np_.hol, [d]).order == 3
    assert translations_normalize(np_)


@pytest.mark.parametrize("fid,p,n", SMALL_FIXTURES + [(1, 5, 3)])
def test_target_matches_partner(fid, p, n):
    plan = derive_abelian_target(family(fid, p, n))
    assert plan.A == family_abelian_partner(fid, p, n)
    assert order_statistics(plan.A) == family(fid, p, n).order_statistics()


@pytest.mark.parametrize("fid,case", [(1, "split"), (2, "split"), (3, "split"), (4, "split"), (5, "extra_d")])
def test_construction_cases(fid, case):
    p, n = 3, 3 if fid == 1 else 2
    assert derive_abelian_target(family(fid, p, n)).case == case


def test_family1_p5_is_regular():
    plan = derive_abelian_target(family(1, 5, 3))
    np_ = build_regular_nprime(plan, build_phi(plan))
    assert np_.subgroup.order == 125 and classify_action(np_.subgroup).regular


def test_remark_group_is_rejected():
    with pytest.raises(ConstructionInapplicable):
        derive_abelian_target(RemarkGroup(3))
    with pytest.raises(ConstructionInapplicable):
        derive_abelian_target(RemarkGroup(5))


def test_verify_report_m27():
    rep = verify_nonab_theorem(family(1, 3, 3))
    assert all(rep["checks"].values())
    assert rep["normalizer_order"] == 27 * 54 == rep["hol_order"]
    assert rep["hol_A_order"] == 27 * 108
    assert rep["theorem_holds"]


@pytest.mark.parametrize("fid,p,n", SMALL_FIXTURES[1:])
def test_verify_report_order_81(fid, p, n):
    rep = verify_nonab_theorem(family(fid, p, n))
    assert rep["theorem_holds"], rep
