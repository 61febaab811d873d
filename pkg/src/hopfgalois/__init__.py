"""Regular subgroups of holomorphs of abelian p-groups, skew braces and
Hopf Galois realizability at desk scale."""

__version__ = "0.1.0"

from .abelian import AbelianType, BudgetExceeded, abelian_type, aut_group, aut_order, order_statistics
from .fixtures import RemarkGroup, family, parse_group_spec
from .holomorph import HolElement, Holomorph, HolSubgroup, normalizer, subgroup_closure
from .pcgroup import PcPresentation

__all__ = [
    "AbelianType",
    "BudgetExceeded",
    "HolElement",
    "HolSubgroup",
    "Holomorph",
    "PcPresentation",
    "RemarkGroup",
    "abelian_type",
    "aut_group",
    "aut_order",
    "family",
    "normalizer",
    "order_statistics",
    "parse_group_spec",
    "subgroup_closure",
]
