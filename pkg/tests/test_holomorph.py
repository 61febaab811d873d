import itertools

import numpy as np
import pytest

from hopfgalois.abelian import AbelianType, BudgetExceeded, aut_order, endo_apply, endo_identity, endo_scalar
from hopfgalois.holomorph import (
    HolElement,
    HolSubgroup,
    Holomorph,
    classify_action,
    full_holomorph,
    hol_act,
    hol_identity,
    hol_inv,
    hol_mul,
    hol_pow,
    hol_pow_closed,
    hol_pow_iterated,
    normalizer,
    stabilizer_of_identity,
    subgroup_closure,
    sylow_p_subgroup,
    transitive_via_sylow,
    translation,
    translation_subgroup,
)
from hopfgalois.suites import random_subgroups

C3 = AbelianType(3, (1,))
C9 = AbelianType(3, (2,))
C33 = AbelianType(3, (1, 1))


def test_hol_mul_examples():
    neg = endo_scalar(C3, -1)
    h = HolElement(C3, (1,), neg)
    assert hol_mul(h, h) == hol_identity(C3)
    x, y = (1, 2), (2, 2)
    assert hol_mul(translation(C33, x), translation(C33, y)) == translation(C33, (0, 1))
    phi = ((1, 0), (1, 1))
    e_phi = HolElement(C33, (0, 0), phi)
    conj = hol_mul(hol_mul(e_phi, translation(C33, y)), hol_inv(e_phi))
    assert conj == translation(C33, endo_apply(C33, phi, y))


def test_hol_mul_rejects_mixed_ambients():
    with pytest.raises(ValueError):
        hol_mul(hol_identity(C3), hol_identity(C9))


def test_hol_pow_examples():
    a = translation(C9, (2,))
    for k in range(20):
        assert hol_pow(a, k) == translation(C9, ((2 * k) % 9,))
    h = HolElement(C33, (1, 0), ((1, 0), (1, 1)))
    assert hol_pow(h, 3, check=True) == hol_identity(C33)
    assert hol_pow(h, 0) == hol_identity(C33)


def test_hol_act_examples():
    phi = endo_scalar(C9, 4)
    assert hol_act(HolElement(C9, (5,), phi), (0,)) == (5,)
    assert hol_act(HolElement(C9, (0,), phi), (2,)) == (8,)
    assert hol_act(HolElement(C9, (1,), phi), (2,)) == (0,)


def _all_elements(t):
    hol = Holomorph(t)
    return hol, [hol.to_element(g) for g in hol.elements()]


def test_indexed_view_matches_formulas():
    hol, els = _all_elements(C9)
    pairs = list(hol.elements())
    for g, h in itertools.product(pairs, repeat=2):
        assert hol.to_element(hol.mul(g, h)) == hol_mul(hol.to_element(g), hol.to_element(h))
    for g in pairs:
        assert hol.to_element(hol.inv(g)) == hol_inv(hol.to_element(g))
        assert hol.from_element(hol.to_element(g)) == g


def test_hol_pow_closed_form_exhaustive_c9():
    _, els = _all_elements(C9)
    for h in els:
        for k in range(55):
            assert hol_pow_closed(h, k) == hol_pow_iterated(h, k)


def test_action_is_a_group_action_c9():
    hol, els = _all_elements(C9)
    pts = [C9.element(i) for i in range(C9.order)]
    ident = hol_identity(C9)
    for y in pts:
        assert hol_act(ident, y) == y
    for g, h in itertools.product(els, repeat=2):
        gh = hol_mul(g, h)
        for y in pts:
            assert hol_act(gh, y) == hol_act(g, hol_act(h, y))


def test_closure_examples():
    hol = Holomorph(C9)
    lam = subgroup_closure(hol, [(1, 0)])
    assert lam.order == 9
    assert subgroup_closure(hol, []).order == 1
    with pytest.raises(BudgetExceeded):
        subgroup_closure(hol, [(1, 0), (0, 1)], cap=9)


def test_classify_action_examples():
    for t in [C3, C9, C33]:
        hol = Holomorph(t)
        assert classify_action(translation_subgroup(hol)).regular
        stab = stabilizer_of_identity(full_holomorph(hol))
        assert not classify_action(stab).transitive
    full3 = full_holomorph(Holomorph(C3))
    rep = classify_action(full3)
    assert full3.order == 6 and rep.transitive and not rep.regular


def test_sylow_examples():
    hol3 = Holomorph(C3)
    syl = sylow_p_subgroup(full_holomorph(hol3))
    assert syl._set == translation_subgroup(hol3)._set
    hol9 = Holomorph(C9)
    lam = translation_subgroup(hol9)
    assert sylow_p_subgroup(lam)._set == lam._set
    syl9 = sylow_p_subgroup(full_holomorph(hol9))
    assert syl9.order == 27
    assert all(hol9.element_order(g) in (1, 3, 9, 27) for g in syl9.elements)
    # every Sylow subgroup of Hol(C9) contains the normal subgroup lambda(C9)
    assert lam._set <= syl9._set


def test_transitive_via_sylow_examples():
    assert transitive_via_sylow(full_holomorph(Holomorph(C3)))
    hol9 = Holomorph(C9)
    stab = stabilizer_of_identity(full_holomorph(hol9))
    assert stab.order == 6
    assert not transitive_via_sylow(stab)


def test_stabilizer_examples():
    for t in [C9, C33]:
        hol = Holomorph(t)
        assert stabilizer_of_identity(full_holomorph(hol)).order == aut_order(t)
        assert stabilizer_of_identity(translation_subgroup(hol)).order == 1
    hol9 = Holomorph(C9)
    minus = hol9.pool_index(endo_scalar(C9, -1))
    sub = subgroup_closure(hol9, [(1, 0), (0, minus)])
    stab = stabilizer_of_identity(sub)
    assert stab.order == 2 and (0, minus) in stab
    assert sub.order // stab.order == len(classify_action(sub).orbit_of_identity)


def test_regular_orbit_map_is_bijective():
    hol = Holomorph(C9)
    m4 = hol.pool_index(endo_scalar(C9, 4))
    sub = subgroup_closure(hol, [(1, m4)])
    assert classify_action(sub).regular
    assert sorted(hol.act_on(g, 0) for g in sub.elements) == list(range(9))


def _brute_normalizer(sub: HolSubgroup) -> int:
    hol = sub.hol
    full = Holomorph(hol.t)
    members = {(x, int(hol.keys[a])) for x, a in sub.elements}
    count = 0
    for h in full.elements():
        hi = full.inv(h)
        ok = True
        for x, a in sub.elements:
            g = (x, full.key_index[int(hol.keys[a])])
            c = full.mul(full.mul(h, g), hi)
            if (c[0], int(full.keys[c[1]])) not in members:
                ok = False
                break
        count += ok
    return count


@pytest.mark.parametrize("t", [C9, C33, AbelianType(3, (3,))])
def test_normalizer_of_lambda_and_hol(t):
    hol = Holomorph(t)
    assert normalizer(translation_subgroup(hol)).order == hol.order
    assert normalizer(full_holomorph(hol), all_elements=True).order == hol.order


@pytest.mark.parametrize("t", [C9, C33])
def test_normalizer_scan_against_brute_force(t):
    hol = Holomorph(t)
    rng = np.random.default_rng(3)
    for sub in random_subgroups(hol, 12, rng, max_gens=2):
        expect = _brute_normalizer(sub)
        assert normalizer(sub).order == expect
        assert normalizer(sub, all_elements=True).order == expect
        assert normalizer(sub, strategy="scan_parallel", threads=3, batch=7).order == expect


def test_normalizer_budget():
    hol = Holomorph(C9)
    with pytest.raises(BudgetExceeded):
        normalizer(translation_subgroup(hol), budget=10)
