import itertools

import numpy as np
import pytest

from hopfgalois.abelian import AbelianType, endo_identity, endo_scalar, matrix_keys
from hopfgalois.brace import (
    Brace,
    GammaFunction,
    GammaRejected,
    NotRegular,
    brace_from_regular,
    check_gamma,
    delta_profile,
    gamma_from_regular,
    lemma_order_check,
    multiplicative_type,
    order_multiset_matches,
    power_formula_check,
    regular_from_gamma,
)
from hopfgalois.construct import build_phi, build_regular_nprime, derive_abelian_target
from hopfgalois.fixtures import family
from hopfgalois.holomorph import Holomorph, classify_action, full_holomorph, subgroup_closure, translation_subgroup
from hopfgalois.realizability import enumerate_regular

C9 = AbelianType(3, (2,))
C93 = AbelianType(3, (2, 1))


def _constant_identity(t):
    return GammaFunction(t, np.broadcast_to(np.eye(t.s, dtype=np.int64), (t.order, t.s, t.s)))


def _hol_c9_regular_oracle():
    """Regular subgroups of Hol(C9) as closures of one or two elements."""
    hol = Holomorph(C9)
    els = list(hol.elements())
    found = set()
    for g, h in itertools.combinations_with_replacement(els, 2):
        sub = subgroup_closure(hol, [g, h])
        if sub.order == 9 and classify_action(sub).regular:
            found.add(frozenset((x, int(hol.keys[a])) for x, a in sub.elements))
    return found


def _hol_c9_gamma_oracle():
    """Brute force over every table gamma: C9 -> (Z/9)^* with gamma(0) = 1."""
    units = np.array([1, 2, 4, 5, 7, 8])
    grids = np.stack(np.meshgrid(*[np.arange(6)] * 8, indexing="ij"), -1).reshape(-1, 8)
    tab = np.concatenate([np.ones((len(grids), 1), dtype=np.int64), units[grids]], axis=1)
    ok = np.ones(len(tab), dtype=bool)
    for x in range(9):
        for y in range(9):
            z = (x + tab[:, x] * y) % 9
            lhs = tab[np.arange(len(tab)), z]
            ok &= lhs == (tab[:, x] * tab[:, y]) % 9
    return tab[ok]


def test_trivial_gamma_and_brace():
    hol = Holomorph(C93)
    lam = translation_subgroup(hol)
    g = gamma_from_regular(lam)
    assert g.is_trivial()
    b = brace_from_regular(lam)
    assert b.is_trivial() and (b.circ == b.dot).all()
    assert multiplicative_type(b).label == "abelian [2, 1]"
    assert delta_profile(_constant_identity(C93)).indices == [1] * 27


def test_gamma_rejects_non_closed_table():
    rng = np.random.default_rng(0)
    units = [1, 2, 4, 5, 7, 8]
    for _ in range(20):
        tab = np.array([[[1]]] + [[[rng.choice(units)]] for _ in range(8)])
        g = GammaFunction(C9, tab)
        bad = check_gamma(g)
        if bad is None:
            continue
        with pytest.raises(GammaRejected) as err:
            regular_from_gamma(g)
        x, y = err.value.pair
        z = (x + int(g.table[x, 0, 0]) * y) % 9
        assert g.table[z, 0, 0] != (g.table[x, 0, 0] * g.table[y, 0, 0]) % 9


def test_gamma_from_non_regular_rejected():
    hol = Holomorph(C9)
    with pytest.raises(NotRegular):
        gamma_from_regular(full_holomorph(hol))


def test_single_generator_example():
    hol = Holomorph(C9)
    m4 = hol.pool_index(endo_scalar(C9, 4))
    sub = subgroup_closure(hol, [(1, m4)])
    g = gamma_from_regular(sub)
    assert g(1) == ((4,),)
    prof = delta_profile(g)
    assert prof.max_index == 2
    assert brace_from_regular(sub).verified["exhaustive"]


def test_hol_c9_census_matches_two_oracles():
    res = enumerate_regular(C9, restrict=False)
    hol = res.subgroups[0].hol
    mine = {frozenset((x, int(hol.keys[a])) for x, a in s.elements) for s in res.subgroups}
    assert mine == _hol_c9_regular_oracle()
    tables = _hol_c9_gamma_oracle()
    assert len(tables) == len(mine) == 3


@pytest.mark.parametrize("exps", [(2,), (1, 1), (3,), (2, 1), (1, 1, 1)])
def test_round_trip_and_brace_axioms_over_corpus(exps):
    t = AbelianType(3, exps)
    res = enumerate_regular(t, restrict=True)
    for s in res.subgroups:
        g = gamma_from_regular(s)
        assert check_gamma(g) is None
        assert regular_from_gamma(g, s.hol)._set == s._set
        assert regular_from_gamma(g)._set == regular_from_gamma(g)._set
        b = Brace(g)
        b.verify()
        assert b.circ_group.order == t.order
        prof = delta_profile(g)
        assert prof.max_index is not None and prof.max_index <= t.n
        assert power_formula_check(s)
        assert power_formula_check(s, k=t.p**2 + 1)


@pytest.fixture(scope="module")
def m27_nprime():
    plan = derive_abelian_target(family(1, 3, 3))
    phis = build_phi(plan)
    return plan, phis, build_regular_nprime(plan, phis)


def test_m27_gamma_values(m27_nprime):
    plan, phis, nprime = m27_nprime
    g = gamma_from_regular(nprime.subgroup)
    A = plan.A
    for i, f in enumerate(phis):
        assert g(A.index(plan.alpha(i))) == f
    assert g(A.index(plan.d)) == endo_identity(A)


def test_m27_brace_type(m27_nprime):
    _, _, nprime = m27_nprime
    b = brace_from_regular(nprime.subgroup)
    assert b.t == C93
    assert not b.is_trivial()
    assert multiplicative_type(b).label == "family 1, p=3, n=3"


def test_lemma_order_check_p_greater_than_n():
    t = AbelianType(5, (1, 1, 1))
    res = enumerate_regular(t, restrict=True)
    assert res.subgroups
    for s in res.subgroups[::7]:
        rep = lemma_order_check(s)
        assert rep.required and rep.passed
        assert order_multiset_matches(s)


def test_lemma_order_check_rejects_bad_input():
    hol = Holomorph(C9)
    with pytest.raises(ValueError):
        lemma_order_check(full_holomorph(hol))
    with pytest.raises(ValueError):
        lemma_order_check(subgroup_closure(hol, [(3, 0)]))


def test_order81_mixing_witness(order81_witness):
    b = brace_from_regular(order81_witness)
    assert b.t.exponents == (1, 1, 1, 1)
    assert multiplicative_type(b).label == "abelian [2, 1, 1]"
    rep = lemma_order_check(order81_witness)
    assert not rep.required and not rep.passed
    f = rep.failures[0]
    assert f["point_killed"] != f["in_stabilizer"]
