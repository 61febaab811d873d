"""Property suites over small holomorphs: transitivity through Sylow
subgroups, the order equivalence, delta nilpotency and power formulas."""

from __future__ import annotations

import numpy as np

from .abelian import AbelianType
from .brace import (
    delta_profile,
    gamma_from_regular,
    identify_group,
    lemma_order_check,
    order_multiset_matches,
    power_formula_check,
)
from .holomorph import HolSubgroup, Holomorph, classify_action, subgroup_closure, transitive_via_sylow
from .realizability import enumerate_regular


def random_subgroups(hol: Holomorph, count: int, rng: np.random.Generator, max_gens: int = 3) -> list[HolSubgroup]:
    """Subgroups generated by 1 to ``max_gens`` uniformly random elements."""
    out = []
    for _ in range(count):
        k = int(rng.integers(1, max_gens + 1))
        gens = [(int(rng.integers(hol.N)), int(rng.integers(hol.M))) for _ in range(k)]
        out.append(subgroup_closure(hol, gens))
    return out


def sylow_transitivity_corpus(seed: int = 0, per_ambient: int = 70) -> dict:
    """classify_action vs transitive_via_sylow on random subgroups of
    Hol(C9), Hol(C3 x C3) and Hol(C27)."""
    rng = np.random.default_rng(seed)
    total = disagree = transitive = 0
    for exps in [(2,), (1, 1), (3,)]:
        hol = Holomorph(AbelianType(3, exps))
        for sub in random_subgroups(hol, per_ambient, rng):
            a = classify_action(sub).transitive
            b = transitive_via_sylow(sub)
            total += 1
            transitive += a
            disagree += a != b
    return {"subgroups": total, "transitive": transitive, "disagreements": disagree}


LEMMA_AMBIENTS = [(5, (1, 1, 1)), (5, (2, 1)), (5, (3,)), (3, (1, 1, 1)), (3, (2, 1)), (3, (3,))]


def census_checks(t: AbelianType) -> dict:
    """Order equivalence, delta indices and power formulas over the
    restricted census of Hol(t)."""
    subs = enumerate_regular(t, restrict=True).subgroups
    lemma_fail = delta_bad = power_bad = multiset_bad = 0
    max_delta = 0
    abelian_types = set()
    for s in subs:
        if not lemma_order_check(s).passed:
            lemma_fail += 1
        prof = delta_profile(gamma_from_regular(s))
        if prof.max_index is None or prof.max_index > t.n:
            delta_bad += 1
        else:
            max_delta = max(max_delta, prof.max_index)
        if not power_formula_check(s):
            power_bad += 1
        if not order_multiset_matches(s):
            multiset_bad += 1
        if s.group.is_abelian:
            abelian_types.add(identify_group(s.group).label)
    return {
        "ambient": t.spec(),
        "p_greater_than_n": t.p > t.n,
        "count": len(subs),
        "lemma_fail": lemma_fail,
        "order_multiset_mismatch": multiset_bad,
        "max_delta_index": max_delta,
        "delta_over_n": delta_bad,
        "power_formula_fail": power_bad,
        "abelian_types": sorted(abelian_types),
    }


def lemma_suite(seed: int = 0) -> dict:
    st = sylow_transitivity_corpus(seed)
    rows = [census_checks(AbelianType(p, e)) for p, e in LEMMA_AMBIENTS]
    ok = st["disagreements"] == 0
    for r in rows:
        ok &= r["delta_over_n"] == 0 and r["power_formula_fail"] == 0
        if r["p_greater_than_n"]:
            ok &= r["lemma_fail"] == 0 and r["order_multiset_mismatch"] == 0
    return {"sylow_transitivity": st, "censuses": rows, "ok": ok}
