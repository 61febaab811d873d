import numpy as np
import pytest

from hopfgalois.abelian import AbelianType
from hopfgalois.fixtures import RemarkGroup, catalog, family
from hopfgalois.groups import (
    FiniteGroup,
    Presentation,
    count_automorphisms,
    count_isomorphisms,
    find_isomorphism,
    invariants_match,
)


def _cyclic(n):
    return FiniteGroup.from_elements(list(range(n)), lambda a, b: (a + b) % n, name=f"C{n}")


def test_cayley_table_requires_identity_first():
    with pytest.raises(ValueError):
        FiniteGroup(np.array([[1, 0], [0, 1]]))


def test_basic_invariants_cyclic():
    G = _cyclic(9)
    assert G.is_abelian and G.exponent == 9 and G.prime == 3
    assert G.order_statistics() == {1: 1, 3: 2, 9: 6}
    assert G.abelian_invariants() == (2,)
    assert G.rank == 1
    assert G.generates([1]) and not G.generates([3])


def test_nonabelian_invariants():
    G = family(1, 3, 3).group
    assert not G.is_abelian
    assert len(G.center) == 3 and len(G.derived_subgroup) == 3
    assert len(G.frattini_subgroup) == 3
    assert G.rank == 2
    assert len(G.closure(G.generating_sequence())) == 27


def test_isomorphism_witness_is_homomorphism():
    G = FiniteGroup.from_abelian(AbelianType(3, (2, 1)))
    H = FiniteGroup.from_elements(
        [(a, b) for b in range(3) for a in range(9)], lambda x, y: ((x[0] + y[0]) % 9, (x[1] + y[1]) % 3)
    )
    f = find_isomorphism(G, H)
    assert f is not None and len(set(f.values())) == 27
    for a in range(27):
        for b in range(27):
            assert f[G.mul(a, b)] == H.mul(f[a], f[b])


def test_count_isomorphisms_small_abelian():
    # |Aut(C3 x C3)| = |GL_2(F_3)|
    G = FiniteGroup.from_abelian(AbelianType(3, (1, 1)))
    assert count_isomorphisms(G, G) == 48
    assert count_isomorphisms(_cyclic(9), _cyclic(9)) == 6


def test_relation_count_matches_oracle_for_remark_group():
    R = RemarkGroup(3)
    assert count_automorphisms(R.presentation) == count_isomorphisms(R.group, R.group)


def test_presentation_check_rejects_false_relation():
    G = _cyclic(9)
    pres = Presentation(G, [1], [([(0, 3)], [])])
    with pytest.raises(ValueError):
        pres.check()


def test_catalog_of_order_81_is_irredundant():
    groups = [h.group for _, h in catalog(3, 81)]
    assert len(groups) == 6
    for i in range(len(groups)):
        for j in range(i + 1, len(groups)):
            assert find_isomorphism(groups[i], groups[j]) is None
    # families 3 and 4 agree on every cheap invariant
    fams = [family(3, 3, 2).group, family(4, 3, 2).group]
    assert invariants_match(*fams)


def test_catalog_of_order_27():
    from hopfgalois.fixtures import heisenberg

    H = heisenberg(3).group
    assert H.order == 27 and H.exponent == 3 and not H.is_abelian
    groups = [h.group for _, h in catalog(3, 27)]
    assert len(groups) == 2 and find_isomorphism(*groups) is None
