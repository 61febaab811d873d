"""Finite abelian p-groups of a given invariant-factor type.

Elements are coordinate tuples ``(c_0, ..., c_{s-1})`` with ``0 <= c_i < p**e_i``.
Each element also has a packed mixed-radix index in ``[0, p**n)`` whose
lexicographic order agrees with the coordinate order.

Endomorphisms are ``s x s`` integer matrices (tuples of row tuples); column
``j`` holds the image of generator ``j`` and row ``i`` is reduced modulo
``p**e_i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

Element = tuple[int, ...]
Endo = tuple[tuple[int, ...], ...]


class BudgetExceeded(RuntimeError):
    """A computation would exceed its configured size budget."""


class EndoError(ValueError):
    """A raw matrix does not define a homomorphism of the group."""

    def __init__(self, row: int, col: int, msg: str):
        super().__init__(f"entry ({row + 1}, {col + 1}): {msg}")
        self.row = row
        self.col = col


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % q for q in range(2, math.isqrt(n) + 1))


_TYPE_CACHES: dict[tuple, dict] = {}


@dataclass(frozen=True)
class AbelianType:
    """The group C_{p^e_1} x ... x C_{p^e_s} with e_1 >= ... >= e_s >= 1."""

    p: int
    exponents: tuple[int, ...]
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if not is_prime(self.p) or self.p == 2:
            raise ValueError(f"p must be an odd prime, got {self.p}")
        exps = tuple(sorted((int(e) for e in self.exponents), reverse=True))
        if not exps or exps[-1] < 1:
            raise ValueError(f"exponents must be positive, got {self.exponents}")
        object.__setattr__(self, "exponents", exps)
        # equal types share one cache of derived data
        object.__setattr__(self, "_cache", _TYPE_CACHES.setdefault((self.p, exps), {}))
        if self.order >= 2**62:
            raise ValueError("group order does not fit the word size")

    def __str__(self):
        return "x".join(f"C{self.p ** e}" for e in self.exponents)

    @property
    def s(self) -> int:
        return len(self.exponents)

    @property
    def n(self) -> int:
        return sum(self.exponents)

    @property
    def order(self) -> int:
        return self.p**self.n

    @property
    def moduli(self) -> tuple[int, ...]:
        return tuple(self.p**e for e in self.exponents)

    @property
    def is_homocyclic(self) -> bool:
        return len(set(self.exponents)) == 1

    def spec(self) -> dict:
        return {"kind": "abelian", "p": self.p, "exponents": list(self.exponents)}

    # -- element encoding -------------------------------------------------

    @cached_property
    def strides(self) -> tuple[int, ...]:
        out = []
        acc = 1
        for m in reversed(self.moduli):
            out.append(acc)
            acc *= m
        return tuple(reversed(out))

    def index(self, x: Sequence[int]) -> int:
        return sum(c * w for c, w in zip(x, self.strides))

    def element(self, idx: int) -> Element:
        out = []
        for m, w in zip(self.moduli, self.strides):
            out.append((idx // w) % m)
        return tuple(out)

    def reduce(self, x: Sequence[int]) -> Element:
        if len(x) != self.s:
            raise ValueError(f"element of length {len(x)} for a group of rank {self.s}")
        return tuple(int(c) % m for c, m in zip(x, self.moduli))

    @cached_property
    def points(self) -> np.ndarray:
        """All elements as an ``(order, s)`` array, in index order."""
        idx = np.arange(self.order, dtype=np.int64)
        cols = [(idx // w) % m for m, w in zip(self.moduli, self.strides)]
        arr = np.stack(cols, axis=1)
        arr.setflags(write=False)
        return arr

    def indices(self, coords: np.ndarray) -> np.ndarray:
        """Packed indices of an ``(..., s)`` coordinate array (already reduced)."""
        return coords @ np.asarray(self.strides, dtype=np.int64)

    def reduce_array(self, coords: np.ndarray) -> np.ndarray:
        return coords % np.asarray(self.moduli, dtype=np.int64)

    @property
    def zero(self) -> Element:
        return (0,) * self.s

    def basis(self) -> list[Element]:
        return [tuple(int(i == j) for i in range(self.s)) for j in range(self.s)]

    @cached_property
    def add_table(self) -> np.ndarray:
        pts = self.points
        summed = self.reduce_array(pts[:, None, :] + pts[None, :, :])
        table = self.indices(summed)
        table.setflags(write=False)
        return table

    @cached_property
    def neg_table(self) -> np.ndarray:
        table = self.indices(self.reduce_array(-self.points))
        table.setflags(write=False)
        return table


def abelian_type(p: int, exponents: Sequence[int]) -> AbelianType:
    return AbelianType(p, tuple(exponents))


def _check(t: AbelianType, x: Sequence[int]) -> None:
    if len(x) != t.s:
        raise ValueError(f"element of length {len(x)} for a group of rank {t.s}")


# -- group law ------------------------------------------------------------


def ab_add(t: AbelianType, x: Sequence[int], y: Sequence[int]) -> Element:
    _check(t, x)
    _check(t, y)
    return tuple((a + b) % m for a, b, m in zip(x, y, t.moduli))


def ab_neg(t: AbelianType, x: Sequence[int]) -> Element:
    _check(t, x)
    return tuple((-a) % m for a, m in zip(x, t.moduli))


def ab_mul(t: AbelianType, k: int, x: Sequence[int]) -> Element:
    """The k-fold sum k*x (k may be negative)."""
    _check(t, x)
    return tuple((k * a) % m for a, m in zip(x, t.moduli))


ab_op = ab_add


def ab_element_order(t: AbelianType, x: Sequence[int]) -> int:
    _check(t, x)
    order = 1
    for c, m in zip(x, t.moduli):
        c %= m
        if c:
            order = max(order, m // math.gcd(c, m))
    return order


def order_statistics(t: AbelianType) -> dict[int, int]:
    """Number of elements of each order, computed from the type."""
    p = t.p
    below = [p ** sum(min(e, k) for e in t.exponents) for k in range(max(t.exponents) + 1)]
    return {p**k: below[k] - (below[k - 1] if k else 0) for k in range(len(below))}


def type_from_order_statistics(p: int, stats: dict[int, int]) -> tuple[int, ...]:
    """Recover the invariant factors of an abelian p-group from its order counts.

    Uses that the number of elements of order dividing p^k is p^(sum min(e_i, k)).
    """
    total = 0
    logs = []
    k = 0
    while total < sum(stats.values()):
        total += stats.get(p**k, 0)
        logs.append(round(math.log(total, p)))
        k += 1
    # logs[k] - logs[k-1] = #{i : e_i >= k}
    counts = [logs[k] - logs[k - 1] for k in range(1, len(logs))]
    exps = []
    for k, c in enumerate(counts, start=1):
        nxt = counts[k] if k < len(counts) else 0
        exps.extend([k] * (c - nxt))
    return tuple(sorted(exps, reverse=True))


# -- Omega_1 ----------------------------------------------------------------


@dataclass(frozen=True)
class Omega1:
    """The subgroup {x : p x = 0}."""

    t: AbelianType

    @property
    def generators(self) -> list[Element]:
        return [ab_mul(self.t, m // self.t.p, g) for m, g in zip(self.t.moduli, self.t.basis())]

    @property
    def order(self) -> int:
        return self.t.p**self.t.s

    def __contains__(self, x: Sequence[int]) -> bool:
        return ab_mul(self.t, self.t.p, x) == self.t.zero

    def elements(self) -> list[Element]:
        p = self.t.p
        out = []
        for idx in range(self.t.order):
            x = self.t.element(idx)
            if all(c % (m // p) == 0 for c, m in zip(x, self.t.moduli)):
                out.append(x)
        return out


def omega1(t: AbelianType) -> Omega1:
    return Omega1(t)


# -- endomorphisms ----------------------------------------------------------


def endo_validate(t: AbelianType, m: Sequence[Sequence[int]]) -> Endo:
    """Reduce a raw matrix and check that it defines an endomorphism.

    Generator j has order p^e_j, so its image must be killed by p^e_j; this
    forces p^(e_i - e_j) | m[i][j] whenever e_i > e_j.
    """
    if len(m) != t.s or any(len(row) != t.s for row in m):
        raise ValueError(f"expected a {t.s}x{t.s} matrix")
    out = []
    for i, (row, mod, ei) in enumerate(zip(m, t.moduli, t.exponents)):
        red = []
        for j, (v, ej) in enumerate(zip(row, t.exponents)):
            v = int(v) % mod
            if ei > ej and v % t.p ** (ei - ej):
                raise EndoError(
                    i, j, f"image of a generator of order {t.p ** ej} would have order {mod // math.gcd(v, mod)}"
                )
            red.append(v)
        out.append(tuple(red))
    return tuple(out)


def endo_identity(t: AbelianType) -> Endo:
    return tuple(tuple(int(i == j) for j in range(t.s)) for i in range(t.s))


def endo_zero(t: AbelianType) -> Endo:
    return tuple((0,) * t.s for _ in range(t.s))


def endo_scalar(t: AbelianType, k: int) -> Endo:
    return tuple(tuple((k * (i == j)) % m for j in range(t.s)) for i, m in enumerate(t.moduli))


def endo_apply(t: AbelianType, m: Endo, x: Sequence[int]) -> Element:
    _check(t, x)
    return tuple(sum(a * b for a, b in zip(row, x)) % mod for row, mod in zip(m, t.moduli))


def endo_add(t: AbelianType, a: Endo, b: Endo) -> Endo:
    return tuple(
        tuple((u + v) % mod for u, v in zip(ra, rb)) for ra, rb, mod in zip(a, b, t.moduli)
    )


def endo_neg(t: AbelianType, a: Endo) -> Endo:
    return tuple(tuple((-u) % mod for u in row) for row, mod in zip(a, t.moduli))


def endo_sub(t: AbelianType, a: Endo, b: Endo) -> Endo:
    return endo_add(t, a, endo_neg(t, b))


def endo_compose(t: AbelianType, a: Endo, b: Endo) -> Endo:
    """The endomorphism x -> a(b(x))."""
    s = t.s
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(s)) % t.moduli[i] for j in range(s))
        for i in range(s)
    )


def endo_ring(t: AbelianType, m1: Endo, m2: Endo | None = None, which: str = "sum") -> Endo:
    if which == "sum":
        return endo_add(t, m1, m2)
    if which == "compose":
        return endo_compose(t, m1, m2)
    if which == "negate":
        return endo_neg(t, m1)
    raise ValueError(f"unknown ring operation {which!r}")


def endo_pow(t: AbelianType, a: Endo, k: int) -> Endo:
    if k < 0:
        raise ValueError("negative power of an endomorphism")
    out = endo_identity(t)
    base = a
    while k:
        if k & 1:
            out = endo_compose(t, out, base)
        base = endo_compose(t, base, base)
        k >>= 1
    return out


def endo_sum_powers(t: AbelianType, a: Endo, k: int) -> Endo:
    """Id + a + ... + a^(k-1) in the endomorphism ring."""
    out = endo_zero(t)
    term = endo_identity(t)
    for _ in range(k):
        out = endo_add(t, out, term)
        term = endo_compose(t, a, term)
    return out


def endo_is_bijective(t: AbelianType, m: Endo) -> bool:
    """Ground-truth invertibility: the image has as many elements as the group."""
    images = {endo_apply(t, m, t.element(i)) for i in range(t.order)}
    return len(images) == t.order


def endo_inverse(t: AbelianType, m: Endo) -> Endo:
    cols = []
    targets = {b: j for j, b in enumerate(t.basis())}
    found: dict[int, Element] = {}
    for i in range(t.order):
        x = t.element(i)
        y = endo_apply(t, m, x)
        if y in targets:
            found[targets[y]] = x
            if len(found) == t.s:
                break
    if len(found) < t.s:
        raise ValueError("matrix is not invertible")
    cols = [found[j] for j in range(t.s)]
    return tuple(tuple(cols[j][i] for j in range(t.s)) for i in range(t.s))


def endo_key(t: AbelianType, m: Endo) -> int:
    return int(matrix_keys(t, np.asarray(m, dtype=np.int64)[None])[0])


def endo_from_key(t: AbelianType, key: int) -> Endo:
    w = key_weights(t)
    rows = []
    for i, mod in enumerate(t.moduli):
        rows.append(tuple(int(key // w[i, j]) % mod for j in range(t.s)))
    return tuple(rows)


# -- batched matrix arithmetic ---------------------------------------------


def key_weights(t: AbelianType) -> np.ndarray:
    cached = t._cache.get("key_weights")
    if cached is None:
        w = np.zeros((t.s, t.s), dtype=np.int64)
        acc = 1
        for i in reversed(range(t.s)):
            for j in reversed(range(t.s)):
                w[i, j] = acc
                acc *= t.moduli[i]
        if acc >= 2**62:
            raise ValueError("matrix keys do not fit the word size")
        cached = t._cache["key_weights"] = w
    return cached


def matrix_keys(t: AbelianType, mats: np.ndarray) -> np.ndarray:
    """Packed integer keys of an ``(B, s, s)`` stack of reduced matrices."""
    return np.einsum("bij,ij->b", mats, key_weights(t))


def row_moduli(t: AbelianType) -> np.ndarray:
    return np.asarray(t.moduli, dtype=np.int64)[:, None]


def batch_compose(t: AbelianType, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.matmul(a, b) % row_moduli(t)


def batch_power(t: AbelianType, mats: np.ndarray, k: int) -> np.ndarray:
    out = np.broadcast_to(np.eye(t.s, dtype=np.int64), mats.shape).copy()
    base = mats.copy()
    while k:
        if k & 1:
            out = batch_compose(t, out, base)
        base = batch_compose(t, base, base)
        k >>= 1
    return out


def batch_apply(t: AbelianType, mats: np.ndarray, coords: np.ndarray) -> np.ndarray:
    """Apply each matrix of ``(B, s, s)`` to every point of ``(P, s)``; shape ``(B, P, s)``."""
    return np.einsum("bij,pj->bpi", mats, coords) % np.asarray(t.moduli, dtype=np.int64)


def omega1_restriction(t: AbelianType, mats: np.ndarray) -> np.ndarray:
    """The F_p matrices of the maps induced on Omega_1 (basis p^(e_j-1) g_j)."""
    p = t.p
    lift = np.asarray([p ** (e - 1) for e in t.exponents], dtype=np.int64)
    scaled = (mats * lift[None, None, :]) % row_moduli(t)
    return (scaled // lift[None, :, None]) % p


def det_mod_p(mats: np.ndarray, p: int) -> np.ndarray:
    """Determinants modulo p of small integer matrices with entries in [0, p)."""
    if mats.shape[-1] == 1:
        return mats[:, 0, 0] % p
    d = np.rint(np.linalg.det(mats.astype(np.float64))).astype(np.int64)
    return d % p


def invertible_mask(t: AbelianType, mats: np.ndarray) -> np.ndarray:
    """Which endomorphisms are automorphisms.

    An endomorphism of a finite p-group is injective iff its kernel meets
    Omega_1 trivially, i.e. iff the induced F_p-linear map on Omega_1 is
    invertible.
    """
    return det_mod_p(omega1_restriction(t, mats), t.p) != 0


# -- automorphism enumeration -----------------------------------------------


def column_candidates(t: AbelianType) -> list[np.ndarray]:
    """For each generator, every element of order dividing its order."""
    p = t.p
    out = []
    for ej in t.exponents:
        axes = [np.arange(0, p**ei, p ** max(ei - ej, 0), dtype=np.int64) for ei in t.exponents]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, t.s)
        out.append(grid)
    return out


def endo_count(t: AbelianType) -> int:
    """Number of endomorphisms, p^(sum_ij min(e_i, e_j))."""
    return t.p ** sum(min(a, b) for a in t.exponents for b in t.exponents)


def iter_endo_batches(t: AbelianType, batch: int = 1 << 16) -> Iterator[np.ndarray]:
    cols = column_candidates(t)
    sizes = [len(c) for c in cols]
    total = math.prod(sizes)
    for start in range(0, total, batch):
        idx = np.arange(start, min(start + batch, total), dtype=np.int64)
        mats = np.empty((len(idx), t.s, t.s), dtype=np.int64)
        rem = idx
        for j in reversed(range(t.s)):
            rem, digit = np.divmod(rem, sizes[j])
            mats[:, :, j] = cols[j][digit]
        yield mats


def iter_aut_batches(t: AbelianType, batch: int = 1 << 16, budget: int = 10**8) -> Iterator[np.ndarray]:
    """Stream all automorphisms in a fixed deterministic order."""
    if endo_count(t) > budget:
        raise BudgetExceeded(f"{endo_count(t)} candidate endomorphisms exceed budget {budget}")
    for mats in iter_endo_batches(t, batch):
        yield mats[invertible_mask(t, mats)]


def aut_order(t: AbelianType, budget: int = 10**8) -> int:
    """Exact |Aut| by counting invertible endomorphisms."""
    cached = t._cache.get("aut_order")
    if cached is None:
        cached = t._cache["aut_order"] = sum(len(b) for b in iter_aut_batches(t, budget=budget))
    return cached


def aut_elements(t: AbelianType, budget: int = 10**6) -> np.ndarray:
    """All automorphisms as an ``(|Aut|, s, s)`` array."""
    cached = t._cache.get("aut_elements")
    if cached is None:
        if endo_count(t) > 50 * budget:
            raise BudgetExceeded(f"{endo_count(t)} candidate endomorphisms exceed budget")
        parts = list(iter_aut_batches(t))
        cached = np.concatenate(parts) if parts else np.zeros((0, t.s, t.s), dtype=np.int64)
        if len(cached) > budget:
            raise BudgetExceeded(f"|Aut| = {len(cached)} exceeds budget {budget}")
        cached.setflags(write=False)
        t._cache["aut_elements"] = cached
    return cached


def aut_order_formula(t: AbelianType) -> int:
    """Closed-form |Aut| (Hillar-Rhea); used only as a cross-check."""
    p = t.p
    e = sorted(t.exponents)
    n = len(e)
    d = [max(l + 1 for l in range(n) if e[l] == e[k]) for k in range(n)]
    c = [min(l + 1 for l in range(n) if e[l] == e[k]) for k in range(n)]
    out = 1
    for k in range(n):
        out *= p ** d[k] - p**k
    for j in range(n):
        out *= p ** (e[j] * (n - d[j]))
    for i in range(n):
        out *= p ** ((e[i] - 1) * (n - c[i] + 1))
    return out


def matrix_group_closure(t: AbelianType, gens: np.ndarray, cap: int | None = None) -> np.ndarray:
    """Elements of the matrix group generated by ``gens`` (identity first)."""
    ident = np.eye(t.s, dtype=np.int64)[None]
    elems = [ident]
    seen = {int(matrix_keys(t, ident)[0])}
    frontier = ident
    gens = np.asarray(gens, dtype=np.int64).reshape(-1, t.s, t.s)
    while len(frontier):
        prods = batch_compose(t, frontier[:, None], gens[None]).reshape(-1, t.s, t.s)
        keys = matrix_keys(t, prods)
        _, first = np.unique(keys, return_index=True)
        first.sort()
        fresh = [i for i in first if int(keys[i]) not in seen]
        seen.update(int(keys[i]) for i in fresh)
        frontier = prods[fresh]
        elems.append(frontier)
        if cap is not None and len(seen) > cap:
            raise BudgetExceeded(f"generated matrix group exceeds {cap} elements")
    return np.concatenate(elems)


@dataclass
class AutGroup:
    t: AbelianType
    order: int
    generators: list[Endo]
    elements: np.ndarray


def aut_group(t: AbelianType, budget: int = 10**6) -> AutGroup:
    """Aut(N) with a generating set verified by closure.

    Generators are collected greedily in enumeration order until the
    generated group reaches the counted order.
    """
    elems = aut_elements(t, budget=budget)
    order = len(elems)
    gens: list[np.ndarray] = []
    current = {int(k) for k in matrix_keys(t, np.eye(t.s, dtype=np.int64)[None])}
    keys = matrix_keys(t, elems)
    for m, key in zip(elems, keys):
        if len(current) == order:
            break
        if int(key) in current:
            continue
        gens.append(m)
        closure = matrix_group_closure(t, np.stack(gens), cap=order)
        current = {int(k) for k in matrix_keys(t, closure)}
    if len(current) != order:
        raise RuntimeError("automorphism generators failed to generate Aut")
    return AutGroup(t, order, [tuple(tuple(int(v) for v in row) for row in g) for g in gens], elems)
