"""Gamma functions, skew braces and the delta diagnostics of regular subgroups.

A regular subgroup R of Hol(N) contains exactly one element (x, gamma(x))
over each x in N.  Its graph gamma: N -> Aut(N) determines R, and
x o y = x + gamma(x)(y) makes (N, +, o) a brace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .abelian import AbelianType, Endo, batch_compose, batch_power, matrix_keys, row_moduli
from .groups import FiniteGroup, iso_check
from .holomorph import HolSubgroup, Holomorph, classify_action, subgroup_closure


class NotRegular(ValueError):
    pass


class GammaRejected(ValueError):
    def __init__(self, x: int, y: int):
        super().__init__(f"gamma(x + gamma(x)(y)) != gamma(x) gamma(y) at x={x}, y={y}")
        self.pair = (x, y)


class BraceAxiomError(AssertionError):
    pass


@dataclass(frozen=True, eq=False)
class GammaFunction:
    """``table[x]`` is the automorphism over the point with packed index x."""

    t: AbelianType
    table: np.ndarray

    def __post_init__(self):
        tab = np.asarray(self.table, dtype=np.int64) % row_moduli(self.t)
        if tab.shape != (self.t.order, self.t.s, self.t.s):
            raise ValueError("gamma table must have one matrix per element")
        tab.setflags(write=False)
        object.__setattr__(self, "table", tab)

    @cached_property
    def keys(self) -> np.ndarray:
        return matrix_keys(self.t, self.table)

    @cached_property
    def images(self) -> np.ndarray:
        """images[x, y] = packed index of gamma(x)(y)."""
        t = self.t
        pts = t.points
        return t.indices(np.einsum("xij,yj->xyi", self.table, pts) % np.asarray(t.moduli))

    def __call__(self, x: int) -> Endo:
        return tuple(tuple(int(v) for v in r) for r in self.table[x])

    def is_trivial(self) -> bool:
        return bool((self.keys == self.keys[0]).all()) and self.keys[0] == matrix_keys(
            self.t, np.eye(self.t.s, dtype=np.int64)[None]
        )[0]


def gamma_from_regular(sub: HolSubgroup) -> GammaFunction:
    if not classify_action(sub).regular:
        raise NotRegular("subgroup does not act regularly")
    hol = sub.hol
    table = np.empty((hol.N, hol.t.s, hol.t.s), dtype=np.int64)
    for x, a in sub.elements:
        table[x] = hol.mats[a]
    return GammaFunction(hol.t, table)


def check_gamma(g: GammaFunction) -> tuple[int, int] | None:
    """First pair (x, y) violating gamma(x + gamma(x)(y)) = gamma(x) gamma(y)."""
    t = g.t
    add = t.add_table
    ident = matrix_keys(t, np.eye(t.s, dtype=np.int64)[None])[0]
    if g.keys[0] != ident:
        return (0, 0)
    for x in range(t.order):
        z = add[x, g.images[x]]
        lhs = g.keys[z]
        rhs = matrix_keys(t, batch_compose(t, g.table[x][None], g.table))
        bad = np.flatnonzero(lhs != rhs)
        if len(bad):
            return (x, int(bad[0]))
    return None


def regular_from_gamma(g: GammaFunction, hol: Holomorph | None = None) -> HolSubgroup:
    """The graph of gamma as a subgroup of Hol(N); rejects non-closed tables.

    ``hol`` must have every gamma(x) in its pool; by default the pool is
    the group generated by the values of gamma.
    """
    bad = check_gamma(g)
    if bad is not None:
        raise GammaRejected(*bad)
    t = g.t
    if hol is None:
        from .abelian import matrix_group_closure

        hol = Holomorph(t, matrix_group_closure(t, np.unique(g.table, axis=0)))
    elements = [(0, 0)] + [(x, hol.key_index[int(g.keys[x])]) for x in range(1, t.order)]
    gens: list = []
    span = frozenset([(0, 0)])
    for e in elements:
        if e not in span:
            gens.append(e)
            span = subgroup_closure(hol, gens, cap=t.order)._set
    if span != frozenset(elements):
        raise AssertionError("graph of gamma does not close up to itself")
    return HolSubgroup(hol, gens, elements)


# -- braces --------------------------------------------------------------------


@dataclass(eq=False)
class Brace:
    """(N, +, o) with x o y = x + gamma(x)(y); elements are packed indices."""

    gamma: GammaFunction
    verified: dict = field(default_factory=dict)

    @property
    def t(self) -> AbelianType:
        return self.gamma.t

    @property
    def order(self) -> int:
        return self.t.order

    @cached_property
    def dot(self) -> np.ndarray:
        return self.t.add_table

    @cached_property
    def circ(self) -> np.ndarray:
        return self.dot[np.arange(self.order)[:, None], self.gamma.images]

    def is_trivial(self) -> bool:
        return bool((self.circ == self.dot).all())

    @cached_property
    def circ_group(self) -> FiniteGroup:
        return FiniteGroup(self.circ, labels=[self.t.element(i) for i in range(self.order)], name="(N, o)")

    def _sampled_triples(self, samples: int, seed: int):
        n = self.order
        rng = np.random.default_rng(seed)
        chunk = 1 << 16
        for start in range(0, samples, chunk):
            m = min(chunk, samples - start)
            yield rng.integers(0, n, m), rng.integers(0, n, m), rng.integers(0, n, m)

    def verify(self, exhaustive_max: int = 125, samples: int = 10**6, seed: int = 0) -> dict:
        """Check both group structures and a o (b + c) = (a o b) - a + (a o c).

        Triples are exhaustive up to ``exhaustive_max`` elements, sampled
        above.  Any failure raises :class:`BraceAxiomError`.
        """
        n = self.order
        C, D = self.circ, self.dot
        neg = self.t.neg_table
        if not (C[0] == np.arange(n)).all() or not (C[:, 0] == np.arange(n)).all():
            raise BraceAxiomError("e_N is not the identity for o")
        srt = np.sort(C, axis=1)
        if not (srt == np.arange(n)).all():
            raise BraceAxiomError("o has a row that is not a permutation")
        checked = 0
        if n <= exhaustive_max:
            # row a at a time: C[C[a, b], c] is the row gather C[C[a]]
            C, D = C.astype(np.intp), D.astype(np.intp)
            for a in range(n):
                Ca = C[a]
                if not (C[Ca] == Ca[C]).all():
                    raise BraceAxiomError("o is not associative")
                rhs = D[D[Ca, neg[a]]][:, Ca]
                if not (Ca[D] == rhs).all():
                    raise BraceAxiomError("brace relation fails")
            self.verified = {"triples": n**3, "exhaustive": True}
            return self.verified
        for a, b, c in self._sampled_triples(samples, seed):
            if not (C[C[a, b], c] == C[a, C[b, c]]).all():
                raise BraceAxiomError("o is not associative")
            lhs = C[a, D[b, c]]
            rhs = D[D[C[a, b], neg[a]], C[a, c]]
            if not (lhs == rhs).all():
                raise BraceAxiomError("brace relation fails")
            checked += len(a)
        self.verified = {"triples": int(checked), "exhaustive": False}
        return self.verified


def brace_from_regular(sub: HolSubgroup, **verify_kw) -> Brace:
    b = Brace(gamma_from_regular(sub))
    b.verify(**verify_kw)
    return b


@dataclass
class TypeLabel:
    label: str | None
    handle: object | None
    fingerprint: dict

    def as_json(self):
        return self.label if self.label is not None else self.fingerprint


def identify_group(G: FiniteGroup) -> TypeLabel:
    """Label a p-group as an abelian type or a catalog fixture; otherwise
    return only its invariant fingerprint."""
    from .fixtures import catalog, handle_label

    fp = G.fingerprint()
    p = G.prime
    if G.is_abelian:
        exps = G.abelian_invariants()
        return TypeLabel(f"abelian {list(exps)}", AbelianType(p, exps), fp)
    if p is not None:
        for label, handle in catalog(p, G.order):
            H = handle.group
            if iso_check(G, H):
                return TypeLabel(handle_label(handle), handle, fp)
    return TypeLabel(None, None, fp)


def multiplicative_type(b: Brace) -> TypeLabel:
    return identify_group(b.circ_group)


def brace_export(b: Brace, hol: Holomorph) -> dict:
    return {
        "additive": b.t.spec(),
        "gamma": [hol.key_index[int(k)] for k in b.gamma.keys],
        "aut_elements": [m.tolist() for m in hol.mats],
        "multiplicative_type": multiplicative_type(b).as_json(),
    }


# -- delta diagnostics ---------------------------------------------------------


def delta_table(g: GammaFunction) -> np.ndarray:
    """delta(x) = gamma(x) - Id, reduced."""
    t = g.t
    return (g.table - np.eye(t.s, dtype=np.int64)[None]) % row_moduli(t)


@dataclass
class DeltaProfile:
    indices: list[int | None]
    max_index: int | None


def delta_profile(g: GammaFunction) -> DeltaProfile:
    """Least m with delta(x)^m = 0 for each x (None if not nilpotent)."""
    t = g.t
    d = delta_table(g)
    out: list[int | None] = [None] * t.order
    power = d.copy()
    for m in range(1, t.n + 1):
        zero = ~power.reshape(t.order, -1).any(axis=1)
        for x in np.flatnonzero(zero):
            if out[x] is None:
                out[x] = m
        power = batch_compose(t, power, d)
    mx = None if any(v is None for v in out) else max(out)
    return DeltaProfile(out, mx)


def binomial_power_matrix(t: AbelianType, delta: np.ndarray, k: int, terms: int) -> np.ndarray:
    """sum_{j < terms} C(k, j+1) delta^j, for a stack of matrices."""
    out = np.zeros_like(delta)
    power = np.broadcast_to(np.eye(t.s, dtype=np.int64), delta.shape).copy()
    for j in range(terms):
        c = math.comb(k, j + 1)
        out = (out + (c % (t.p ** t.exponents[0])) * power) % row_moduli(t)
        power = batch_compose(t, power, delta)
    return out


def power_formula_check(sub: HolSubgroup, k: int | None = None) -> bool:
    """h^k via the holomorph equals ((sum_j C(k, j+1) delta(x)^j)(x), gamma(x)^k)
    with the sum truncated after n terms, for every h = (x, gamma(x)) in sub.
    The default k is p."""
    hol = sub.hol
    t = hol.t
    k = t.p if k is None else k
    g = gamma_from_regular(sub)
    coeff = binomial_power_matrix(t, delta_table(g), k, t.n)
    pts = t.points
    pred_pts = t.indices(np.einsum("xij,xj->xi", coeff, pts) % np.asarray(t.moduli))
    pred_keys = matrix_keys(t, batch_power(t, g.table, k))
    for x, a in sub.elements:
        y, b = hol.power((x, a), k)
        if y != pred_pts[x] or int(hol.keys[b]) != int(pred_keys[x]):
            return False
    return True


@dataclass
class LemmaReport:
    p: int
    n: int
    order: int
    checked: int
    failures: list[dict]
    required: bool

    @property
    def passed(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "order": self.order,
            "checked": self.checked,
            "passed": self.passed,
            "required": self.required,
            "failures": self.failures[:10],
            "failure_count": len(self.failures),
        }


def lemma_order_check(sub: HolSubgroup) -> LemmaReport:
    """For h = (a, f) in a transitive p-subgroup: p^k kills a iff h^(p^k)
    fixes e_N.  Must hold when p > n; otherwise only reported."""
    hol = sub.hol
    t = hol.t
    p, n = t.p, t.n
    order = sub.order
    if p ** round(math.log(order, p)) != order:
        raise ValueError("subgroup order is not a power of p")
    if not classify_action(sub).transitive:
        raise ValueError("subgroup is not transitive")
    from .abelian import ab_element_order

    failures = []
    checked = 0
    kmax = round(math.log(order, p))
    for h in sub.elements:
        oa = ab_element_order(t, t.element(h[0]))
        q = h
        for k in range(kmax + 1):
            lhs = oa <= p**k
            rhs = q[0] == 0
            checked += 1
            if lhs != rhs:
                failures.append({"element": [h[0], h[1]], "k": k, "point_killed": lhs, "in_stabilizer": rhs})
            q = hol.power(q, p)
    return LemmaReport(p, n, order, checked, failures, p > n)


def order_multiset_matches(sub: HolSubgroup) -> bool:
    """Element orders of a regular sub agree with those of N as multisets."""
    from .abelian import order_statistics

    hol = sub.hol
    stats: dict[int, int] = {}
    for h in sub.elements:
        o = hol.element_order(h)
        stats[o] = stats.get(o, 0) + 1
    return dict(sorted(stats.items())) == order_statistics(hol.t)
