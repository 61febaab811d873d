"""From a class-2 group N with |[N, N]| = p to an abelian group A of the same
order and a regular subgroup N' of Hol(A) isomorphic to N.

With lifts beta_i of a basis b_i of N/[N, N] and c generating [N, N]:

* if every beta_i has the order of b_i, A = (+) <alpha_i> (+) <d> with d of
  order p ("extra_d");
* otherwise some beta_i0 has order p ord(b_i0), A = (+) <alpha_i> and
  d = alpha_i0^(ord/p) ("split").

f_i fixes d and sends alpha_j to d^(k_ij / 2) alpha_j where
beta_i beta_j beta_i^-1 = c^(k_ij) beta_j, and N' = <(alpha_i, f_i), (d, Id)>.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .abelian import (
    AbelianType,
    Endo,
    endo_identity,
    endo_pow,
    endo_validate,
    matrix_group_closure,
    order_statistics,
)
from .groups import iso_check
from .holomorph import (
    HolElement,
    HolSubgroup,
    Holomorph,
    classify_action,
    hol_inv,
    hol_mul,
    hol_pow,
    normalizer,
    subgroup_closure,
)
from .pcgroup import PcElement, PcPresentation


class ConstructionInapplicable(ValueError):
    pass


class ConstructionError(AssertionError):
    pass


@dataclass
class ConstructionPlan:
    source: PcPresentation
    lifts: list[PcElement]
    quotient_orders: list[int]
    lift_orders: list[int]
    comm: list[list[int]]
    case: str
    i0: int | None
    A: AbelianType
    alpha_pos: list[int]
    d: tuple[int, ...]

    def alpha(self, i: int) -> tuple[int, ...]:
        v = [0] * self.A.s
        v[self.alpha_pos[i]] = 1
        return tuple(v)

    def as_dict(self) -> dict:
        return {
            "source": self.source.spec(),
            "A": self.A.spec(),
            "case": self.case,
            "i0": self.i0,
            "lift_orders": self.lift_orders,
            "quotient_orders": self.quotient_orders,
            "d": list(self.d),
        }


def _normalized_lifts(src: PcPresentation) -> tuple[list[PcElement], int | None]:
    """Lifts with at most one power tail.

    If beta_i (i > i0) also has a tail, replace it by beta_i beta_i0^(-r m_i0 / m_i)
    with r = t_i / t_i0; in class 2 with p odd this removes the tail and keeps
    a basis of N/[N, N].
    """
    p = src.p
    lifts = [src.gen(i) for i in range(src.s)]
    tails = list(src.power_tails)
    nz = [i for i, t in enumerate(tails) if t]
    if not nz:
        return lifts, None
    i0 = nz[0]
    m = src.gen_orders
    for i in nz[1:]:
        r = tails[i] * pow(tails[i0], -1, p) % p
        shift = src.pow(src.gen(i0), (-r * (m[i0] // m[i])) % (p * m[i0]))
        lifts[i] = src.mul(lifts[i], shift)
    return lifts, i0


def derive_abelian_target(src: PcPresentation) -> ConstructionPlan:
    p = src.p
    if hasattr(src, "derived_subgroup"):
        dsize = len(src.derived_subgroup())
        if dsize != p:
            raise ConstructionInapplicable(f"|[N, N]| = {dsize}, but the construction needs |[N, N]| = {p}")
    if not isinstance(src, PcPresentation):
        raise ConstructionInapplicable("source must be a class-2 presentation")
    lifts, i0 = _normalized_lifts(src)
    m = list(src.gen_orders)
    orders = [src.element_order(b) for b in lifts]
    for i, (o, q) in enumerate(zip(orders, m)):
        if o != q and o != p * q:
            raise ConstructionError(f"lift {i} has order {o}, quotient order {q}")
    split = [i for i in range(src.s) if orders[i] == p * m[i]]
    if len(split) > 1:
        raise ConstructionError("tail normalization left several long lifts")
    comm = []
    for i in range(src.s):
        row = []
        for j in range(src.s):
            com = src.commutator(lifts[i], lifts[j])
            if any(com[1:]):
                raise ConstructionError("commutator of lifts is not central")
            row.append(com[0])
        comm.append(row)
    # coordinates of A sorted by non-increasing order, ties by generator index
    if split:
        i0 = split[0]
        gens = [(orders[i], i) for i in range(src.s)]
        case = "split"
    else:
        i0 = None
        gens = [(orders[i], i) for i in range(src.s)] + [(p, src.s)]
        case = "extra_d"
    ranked = sorted(gens, key=lambda g: (-g[0], g[1]))
    pos = {g[1]: k for k, g in enumerate(ranked)}
    exps = [round(np.log(o) / np.log(p)) for o, _ in ranked]
    A = AbelianType(p, tuple(exps))
    d = [0] * A.s
    if case == "split":
        d[pos[i0]] = orders[i0] // p
    else:
        d[pos[src.s]] = 1
    plan = ConstructionPlan(src, lifts, m, orders, comm, case, i0, A, [pos[i] for i in range(src.s)], tuple(d))
    if order_statistics(A) != src.order_statistics(budget=10**5):
        raise ConstructionError("A and N have different order statistics")
    return plan


def build_phi(plan: ConstructionPlan) -> list[Endo]:
    """f_i(d) = d, f_i(alpha_j) = d^(k_ij / 2) alpha_j, with 1/2 taken mod p."""
    A, p = plan.A, plan.source.p
    half = pow(2, -1, p)
    phis = []
    for i in range(plan.source.s):
        cols = [None] * A.s
        for j in range(plan.source.s):
            h = plan.comm[i][j] * half % p
            cols[plan.alpha_pos[j]] = [a + h * dd for a, dd in zip(plan.alpha(j), plan.d)]
        for k in range(A.s):
            if cols[k] is None:
                cols[k] = [1 if r == k else 0 for r in range(A.s)]
        mat = [[cols[c][r] for c in range(A.s)] for r in range(A.s)]
        phis.append(endo_validate(A, mat))
    _check_phis(plan, phis)
    return phis


def _check_phis(plan: ConstructionPlan, phis: list[Endo]) -> None:
    from .abelian import ab_mul, endo_apply, endo_compose

    A, p = plan.A, plan.source.p
    ident = endo_identity(A)
    for i, f in enumerate(phis):
        if endo_apply(A, f, plan.d) != plan.d:
            raise ConstructionError(f"f_{i} moves d")
        if endo_pow(A, f, p) != ident:
            raise ConstructionError(f"f_{i}^p is not the identity")
        for j in range(len(phis)):
            aj = ab_mul(A, p, plan.alpha(j))
            if endo_apply(A, f, aj) != aj:
                raise ConstructionError(f"f_{i} moves alpha_{j}^p")
            if endo_compose(A, f, phis[j]) != endo_compose(A, phis[j], f):
                raise ConstructionError(f"f_{i} and f_{j} do not commute")


@dataclass
class NPrime:
    plan: ConstructionPlan
    phis: list[Endo]
    hol: Holomorph
    subgroup: HolSubgroup
    generators: list[HolElement] = field(default_factory=list)


def build_regular_nprime(plan: ConstructionPlan, phis: list[Endo]) -> NPrime:
    """N' = <(alpha_i, f_i), (d, Id)> inside N x| <f_1, ..., f_s>."""
    A = plan.A
    pool = matrix_group_closure(A, np.asarray(phis, dtype=np.int64))
    hol = Holomorph(A, pool, name=f"{A} x| <f_i>")
    gens = [HolElement(A, plan.alpha(i), f) for i, f in enumerate(phis)] + [
        HolElement(A, plan.d, endo_identity(A))
    ]
    sub = subgroup_closure(hol, [hol.from_element(g) for g in gens], cap=A.order)
    if sub.order != A.order or not classify_action(sub).regular:
        raise ConstructionError(f"N' has order {sub.order} and is not regular")
    _check_conjugation_law(plan, gens)
    return NPrime(plan, phis, hol, sub, gens)


def _check_conjugation_law(plan: ConstructionPlan, gens: list[HolElement]) -> None:
    s = plan.source.s
    dgen = gens[-1]
    for i in range(s):
        gi = gens[i]
        if hol_mul(gi, dgen) != hol_mul(dgen, gi):
            raise ConstructionError(f"(d, Id) does not commute with generator {i}")
        if hol_pow(gi, plan.lift_orders[i]) != hol_pow(dgen, 0):
            raise ConstructionError(f"generator {i} does not have the order of beta_{i}")
        for k in range(1, plan.lift_orders[i]):
            hk = hol_pow(gi, k)
            if hk.auto != endo_pow(plan.A, gi.auto, k) or hk.point != tuple(
                (k * v) % q for v, q in zip(gi.point, plan.A.moduli)
            ):
                raise ConstructionError(f"(alpha_{i}, f_{i})^{k} != (alpha_{i}^{k}, f_{i}^{k})")
        for j in range(s):
            lhs = hol_mul(hol_mul(gi, gens[j]), hol_inv(gi))
            rhs = hol_mul(hol_pow(dgen, plan.comm[i][j]), gens[j])
            if lhs != rhs:
                raise ConstructionError(f"conjugation law fails for ({i}, {j})")


def translations_normalize(np_: NPrime) -> bool:
    """Every (x, Id) normalizes N': conjugates of the generators stay inside."""
    from .holomorph import hol_identity

    A = np_.plan.A
    members = {np_.hol.to_element(g) for g in np_.subgroup.elements}
    for idx in range(A.order):
        x = HolElement(A, A.element(idx), endo_identity(A))
        xi = hol_inv(x)
        for g in np_.generators:
            if hol_mul(hol_mul(x, g), xi) not in members:
                return False
    return True


def verify_nonab_theorem(src: PcPresentation, strategy: str = "scan", threads: int = 1,
                         budget: int = 2 * 10**9) -> dict:
    """All proof obligations of the construction plus the normalizer count."""
    plan = derive_abelian_target(src)
    phis = build_phi(plan)
    np_ = build_regular_nprime(plan, phis)
    sub = np_.subgroup
    iso = iso_check(sub.group, src.group)
    aut_n = src.aut_count()
    hol_nprime = src.order * aut_n
    norm = normalizer(sub, strategy=strategy, threads=threads, budget=budget)
    checks = {
        "regular": classify_action(sub).regular,
        "isomorphic_to_N": bool(iso),
        "order_stats_match": order_statistics(plan.A) == src.order_statistics(budget=10**5),
        "translations_normalize": translations_normalize(np_),
    }
    equality = norm.order == hol_nprime
    return {
        "source": src.spec(),
        "A": plan.A.spec(),
        "case": plan.case,
        "checks": checks,
        "normalizer_order": norm.order,
        "hol_order": hol_nprime,
        "hol_A_order": norm.hol_order,
        "aut_N": aut_n,
        "equality": equality,
        "theorem_holds": all(checks.values()) and equality,
        "witness": sub.witness(),
    }


def remark_negative_check(p: int = 5, threads: int = 1, seed: int | None = None,
                          max_nodes: int | None = None) -> dict:
    """The order-p^4 group with |[N, N]| = p^2: the construction does not
    apply, and a regular copy of N in Hol(C_{p^2} x C_p x C_p) has normalizer
    of order different from |Hol(N)|."""
    from .fixtures import RemarkGroup, remark_abelian_partner
    from .realizability import SearchSpec, search_regular

    N = RemarkGroup(p)
    A = remark_abelian_partner(p)
    derived = len(N.derived_subgroup())
    try:
        derive_abelian_target(N)
        inapplicable = False
    except ConstructionInapplicable:
        inapplicable = True
    res = search_regular(SearchSpec(A, N, True, seed=seed, threads=threads, max_nodes=max_nodes))
    if res.witness is None:
        return {"derived_order": derived, "construction_inapplicable": inapplicable, "found": False}
    aut_n = N.aut_count()
    norm = normalizer(res.witness, strategy="scan_parallel", threads=threads, budget=10**10)
    return {
        "derived_order": derived,
        "construction_inapplicable": inapplicable,
        "found": True,
        "witness": res.witness.witness(),
        "nodes": res.nodes,
        "normalizer_order": norm.order,
        "hol_order": N.order * aut_n,
        "differs": norm.order != N.order * aut_n,
    }
