"""The holomorph Hol(N) = N x| Aut(N) of an abelian p-group N.

Two views of the same group live here.

* :class:`HolElement` with :func:`hol_mul` etc. computes directly with
  coordinate vectors and matrices, ``(x, f)(y, g) = (x + f(y), f g)``.
* :class:`Holomorph` fixes a *pool* of automorphisms (a subgroup of Aut(N),
  by default all of it) and encodes elements as integer pairs
  ``(point index, pool index)`` with tabulated arithmetic.  Searches and
  closures run in this view.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .abelian import (
    AbelianType,
    BudgetExceeded,
    Element,
    Endo,
    ab_add,
    ab_mul,
    ab_neg,
    aut_elements,
    aut_order,
    batch_compose,
    batch_power,
    endo_apply,
    endo_compose,
    endo_identity,
    endo_inverse,
    endo_pow,
    endo_sum_powers,
    iter_aut_batches,
    matrix_keys,
)

Pair = tuple[int, int]


# -- coordinate view -----------------------------------------------------------


@dataclass(frozen=True)
class HolElement:
    t: AbelianType
    point: Element
    auto: Endo

    def __mul__(self, other: "HolElement") -> "HolElement":
        return hol_mul(self, other)


def hol_identity(t: AbelianType) -> HolElement:
    return HolElement(t, t.zero, endo_identity(t))


def translation(t: AbelianType, x: Sequence[int]) -> HolElement:
    """lambda_N(x) = (x, Id)."""
    return HolElement(t, t.reduce(x), endo_identity(t))


def hol_mul(h1: HolElement, h2: HolElement) -> HolElement:
    if h1.t != h2.t:
        raise ValueError("holomorph elements over different groups")
    t = h1.t
    return HolElement(t, ab_add(t, h1.point, endo_apply(t, h1.auto, h2.point)), endo_compose(t, h1.auto, h2.auto))


def hol_inv(h: HolElement) -> HolElement:
    t = h.t
    finv = endo_inverse(t, h.auto)
    return HolElement(t, endo_apply(t, finv, ab_neg(t, h.point)), finv)


def hol_pow_iterated(h: HolElement, k: int) -> HolElement:
    out = hol_identity(h.t)
    for _ in range(k):
        out = hol_mul(out, h)
    return out


def hol_pow_closed(h: HolElement, k: int) -> HolElement:
    """(a, f)^k = ((Id + f + ... + f^(k-1))(a), f^k)."""
    t = h.t
    return HolElement(t, endo_apply(t, endo_sum_powers(t, h.auto, k), h.point), endo_pow(t, h.auto, k))


def hol_pow(h: HolElement, k: int, check: bool = False) -> HolElement:
    if k < 0:
        raise ValueError("negative exponent")
    out = hol_pow_closed(h, k)
    if check and out != hol_pow_iterated(h, k):
        raise AssertionError("closed-form power disagrees with iterated product")
    return out


def hol_act(h: HolElement, y: Sequence[int]) -> Element:
    """(a, f) . y = a + f(y)."""
    t = h.t
    return ab_add(t, h.point, endo_apply(t, h.auto, y))


# -- indexed view -----------------------------------------------------------------


class Holomorph:
    """N x| P for a pool P <= Aut(N) given as an array of matrices.

    The pool must be a group; the identity is moved to index 0.
    """

    def __init__(self, t: AbelianType, pool: np.ndarray | None = None, name: str = ""):
        if pool is None:
            pool = aut_elements(t)
            name = name or f"Hol({t})"
        pool = np.asarray(pool, dtype=np.int64).reshape(-1, t.s, t.s)
        keys = matrix_keys(t, pool)
        ident = int(matrix_keys(t, np.eye(t.s, dtype=np.int64)[None])[0])
        where = np.flatnonzero(keys == ident)
        if len(where) != 1:
            raise ValueError("pool must contain the identity exactly once")
        order = np.r_[where, np.delete(np.arange(len(pool)), where)]
        self.t = t
        self.name = name or f"{t} x| P"
        self.mats = pool[order]
        self.mats.setflags(write=False)
        self.keys = keys[order]
        self.key_index = {int(k): i for i, k in enumerate(self.keys)}
        if len(self.key_index) != len(self.keys):
            raise ValueError("pool has repeated automorphisms")
        self.N = t.order
        self.M = len(self.mats)
        pts = t.points
        images = np.einsum("mij,pj->mpi", self.mats, pts) % np.asarray(t.moduli)
        self.act = t.indices(images).astype(np.int32)
        self.act.setflags(write=False)
        self.add = t.add_table.tolist()
        self.neg = t.neg_table.tolist()
        self.basis = [t.index(b) for b in t.basis()]
        sig = self.act[:, self.basis]
        self.sig_index = {tuple(r): i for i, r in enumerate(sig.tolist())}
        self.sigs = [tuple(r) for r in sig.tolist()]
        self._rows: dict[int, list[int]] = {}
        if self.M * self.N <= 2_000_000:
            self._rows = dict(enumerate(self.act.tolist()))
        self._mul_table: list[list[int]] | None = None
        if self.M <= 1500:
            self._mul_table = self._tabulate()
        inv_perm = np.argsort(self.act, axis=1)
        self.ainv = [self.sig_index[tuple(r)] for r in inv_perm[:, self.basis].tolist()]

    def _tabulate(self) -> list[list[int]]:
        comp = self.act[:, self.act[:, self.basis]]  # (a, b, j) -> a(b(e_j))
        weights = np.asarray([self.N**j for j in range(self.t.s)], dtype=np.int64)
        sig_keys = self.act[:, self.basis].astype(np.int64) @ weights
        order = np.argsort(sig_keys)
        ck = comp.astype(np.int64) @ weights
        pos = np.searchsorted(sig_keys[order], ck)
        if (pos >= self.M).any() or (sig_keys[order][np.minimum(pos, self.M - 1)] != ck).any():
            raise ValueError("automorphism pool is not closed under composition")
        return order[pos].tolist()

    def __repr__(self):
        return f"Holomorph({self.name}, |N|={self.N}, |P|={self.M})"

    @property
    def order(self) -> int:
        return self.N * self.M

    def row(self, a: int) -> list[int]:
        r = self._rows.get(a)
        if r is None:
            r = self._rows[a] = self.act[a].tolist()
        return r

    def compose(self, a: int, b: int) -> int:
        if self._mul_table is not None:
            return self._mul_table[a][b]
        ra = self.row(a)
        return self.sig_index[tuple(ra[y] for y in self.sigs[b])]

    identity: Pair = (0, 0)

    def mul(self, g: Pair, h: Pair) -> Pair:
        return (self.add[g[0]][self.row(g[1])[h[0]]], self.compose(g[1], h[1]))

    def inv(self, g: Pair) -> Pair:
        ai = self.ainv[g[1]]
        return (self.row(ai)[self.neg[g[0]]], ai)

    def power(self, g: Pair, k: int) -> Pair:
        out = self.identity
        while k:
            if k & 1:
                out = self.mul(out, g)
            g = self.mul(g, g)
            k >>= 1
        return out

    def element_order(self, g: Pair) -> int:
        k, x = 1, g
        while x != self.identity:
            x = self.mul(x, g)
            k += 1
        return k

    def act_on(self, g: Pair, y: int) -> int:
        return self.add[g[0]][self.row(g[1])[y]]

    def code(self, g: Pair) -> int:
        return g[1] * self.N + g[0]

    def decode(self, c: int) -> Pair:
        return (c % self.N, c // self.N)

    def to_element(self, g: Pair) -> HolElement:
        m = tuple(tuple(int(v) for v in row) for row in self.mats[g[1]])
        return HolElement(self.t, self.t.element(g[0]), m)

    def from_element(self, h: HolElement) -> Pair:
        from .abelian import endo_key

        return (self.t.index(h.point), self.key_index[endo_key(self.t, h.auto)])

    def pool_index(self, m: Endo) -> int:
        from .abelian import endo_key

        return self.key_index[endo_key(self.t, m)]

    def elements(self) -> Iterator[Pair]:
        for a in range(self.M):
            for x in range(self.N):
                yield (x, a)

    def translations(self) -> list[Pair]:
        return [(b, 0) for b in self.basis]


# -- subgroups -----------------------------------------------------------------


class ClosureCapExceeded(BudgetExceeded):
    pass


@dataclass
class HolSubgroup:
    hol: Holomorph
    generators: list[Pair]
    elements: list[Pair]
    _set: frozenset = field(default=frozenset(), repr=False)

    def __post_init__(self):
        if not self._set:
            self._set = frozenset(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: Pair) -> bool:
        return g in self._set

    def __len__(self):
        return len(self.elements)

    @cached_property
    def canonical_key(self) -> tuple[int, ...]:
        """Sorted codes (automorphism key, point); independent of pool indexing."""
        N = self.hol.N
        return tuple(sorted(int(self.hol.keys[a]) * N + x for x, a in self.elements))

    def points(self) -> list[int]:
        return [x for x, _ in self.elements]

    def generator_elements(self) -> list[HolElement]:
        return [self.hol.to_element(g) for g in self.generators]

    def witness(self) -> dict:
        return {
            "ambient": self.hol.t.spec(),
            "generators": [
                {"point": list(h.point), "matrix": [list(r) for r in h.auto]} for h in self.generator_elements()
            ],
        }

    @cached_property
    def group(self):
        """The subgroup as a :class:`~hopfgalois.groups.FiniteGroup`."""
        from .groups import FiniteGroup

        return FiniteGroup.from_elements(self.elements, self.hol.mul, name=f"subgroup of {self.hol.name}")


def subgroup_closure(hol: Holomorph, generators: Iterable[Pair], cap: int | None = None) -> HolSubgroup:
    """Breadth-first closure of ``generators`` under multiplication."""
    gens = [g for g in generators if g != hol.identity]
    elements = [hol.identity]
    seen = {hol.identity}
    frontier = [hol.identity]
    mul = hol.mul
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    elements.append(y)
                    nxt.append(y)
                    if cap is not None and len(elements) > cap:
                        raise ClosureCapExceeded(f"generated subgroup exceeds {cap} elements")
        frontier = nxt
    return HolSubgroup(hol, list(gens), elements, frozenset(seen))


def translation_subgroup(hol: Holomorph) -> HolSubgroup:
    """lambda_N(N)."""
    return subgroup_closure(hol, hol.translations())


def full_holomorph(hol: Holomorph) -> HolSubgroup:
    elems = list(hol.elements())
    return HolSubgroup(hol, [], elems)


@dataclass
class ActionReport:
    transitive: bool
    regular: bool
    orbit_of_identity: frozenset


def classify_action(sub: HolSubgroup) -> ActionReport:
    """Orbit of e_N is the set of points, since (a, f) . e_N = a."""
    orbit = frozenset(sub.points())
    transitive = len(orbit) == sub.hol.N
    return ActionReport(transitive, transitive and sub.order == sub.hol.N, orbit)


def stabilizer_of_identity(sub: HolSubgroup) -> HolSubgroup:
    elems = [g for g in sub.elements if g[0] == 0]
    return HolSubgroup(sub.hol, elems[1:], elems)


def p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


def is_power_of(n: int, p: int) -> bool:
    return p_part(n, p) == n


def sylow_p_subgroup(sub: HolSubgroup, budget: int = 10**6) -> HolSubgroup:
    """A Sylow p-subgroup by greedy closure over p-elements.

    One pass suffices: a p-subgroup that no single p-element extends is
    maximal, hence Sylow.
    """
    hol = sub.hol
    p = hol.t.p
    if sub.order > budget:
        raise BudgetExceeded(f"subgroup order {sub.order} exceeds budget {budget}")
    target = p_part(sub.order, p)
    current = subgroup_closure(hol, [])
    for g in sorted(sub.elements, key=hol.code):
        if current.order == target:
            break
        if g in current or not is_power_of(hol.element_order(g), p):
            continue
        try:
            cand = subgroup_closure(hol, current.generators + [g], cap=target)
        except ClosureCapExceeded:
            continue
        if is_power_of(cand.order, p):
            current = cand
    if current.order != target:
        raise AssertionError("greedy Sylow construction did not reach the p-part")
    return current


def transitive_via_sylow(sub: HolSubgroup) -> bool:
    return classify_action(sylow_p_subgroup(sub)).transitive


# -- normalizer scan -------------------------------------------------------------


@dataclass
class NormalizerResult:
    order: int
    scanned: int
    hol_order: int


def _conj_codes(t: AbelianType, X: np.ndarray, Xinv: np.ndarray, a: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Codes key*N + point of (z, X)(a, f)(z, X)^-1 for every z, shape (B, N).

    (z, X)(a, f)(z, X)^-1 = (z + X a - psi z, psi) with psi = X f X^-1.
    """
    psi = batch_compose(t, batch_compose(t, X, f[None]), Xinv)
    kpsi = matrix_keys(t, psi)
    Z = t.points
    Xa = np.einsum("bij,j->bi", X, a)
    W = (Z[None, :, :] - np.einsum("bij,pj->bpi", psi, Z) + Xa[:, None, :]) % np.asarray(t.moduli)
    return kpsi[:, None] * t.order + t.indices(W)


def normalizer(
    sub: HolSubgroup,
    strategy: str = "scan",
    threads: int = 1,
    budget: int = 2 * 10**9,
    batch: int = 2048,
    all_elements: bool = False,
) -> NormalizerResult:
    """|N_Hol(N)(sub)| by scanning every element of the full holomorph.

    h normalizes sub iff h g h^-1 lies in sub for every generator g: h
    conjugation is an injective homomorphism, so it maps the finite group
    sub into itself iff it maps generators into it, and then onto it.
    ``all_elements`` conjugates every element instead (a cross-check).
    """
    t = sub.hol.t
    n_aut = aut_order(t)
    hol_order = n_aut * t.order
    if hol_order > budget:
        raise BudgetExceeded(f"|Hol| = {hol_order} exceeds scan budget {budget}")
    codes = np.unique(np.asarray(sub.canonical_key, dtype=np.int64))
    gens = sub.elements[1:] if all_elements else sub.generators
    if all_elements and hol_order > 10**4 * max(1, sub.order):
        raise BudgetExceeded("element-wise normalizer check is reserved for small holomorphs")
    hol = sub.hol
    gen_data = [(np.asarray(hol.t.element(x), dtype=np.int64), hol.mats[a]) for x, a in gens]
    sub_keys = np.unique(codes // t.order)

    def work(X: np.ndarray) -> int:
        Xinv = batch_power(t, X, n_aut - 1)
        alive = np.ones((len(X), t.order), dtype=bool)
        for a, f in gen_data:
            # discard automorphism parts whose conjugate of f is not in sub at all
            psi_keys = matrix_keys(t, batch_compose(t, batch_compose(t, X, f[None]), Xinv))
            rows = np.isin(psi_keys, sub_keys)
            alive[~rows] = False
            idx = np.flatnonzero(alive.any(axis=1))
            if not len(idx):
                return 0
            cc = _conj_codes(t, X[idx], Xinv[idx], a, f)
            alive[idx] &= np.isin(cc, codes)
        return int(alive.sum())

    batches = iter_aut_batches(t, batch=batch)
    if strategy == "scan_parallel" and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            total = sum(ex.map(work, batches))
    elif strategy in ("scan", "scan_parallel"):
        total = sum(work(X) for X in batches)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return NormalizerResult(total, hol_order, hol_order)
