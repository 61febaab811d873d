import pytest

from hopfgalois.abelian import AbelianType
from hopfgalois.realizability import SearchSpec, search_regular


@pytest.fixture(scope="session")
def order81_witness():
    """Regular C9 x C3 x C3 inside the restricted Hol(C3^4)."""
    res = search_regular(SearchSpec(AbelianType(3, (1, 1, 1, 1)), AbelianType(3, (2, 1, 1))))
    assert res.found
    return res.witness
