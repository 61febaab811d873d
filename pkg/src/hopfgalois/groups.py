"""Small finite groups given by Cayley tables.

Every group handle used for isomorphism testing, automorphism counting and
type identification is a :class:`FiniteGroup` whose elements are
``0..order-1`` with ``0`` the identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Sequence

import numpy as np

from .abelian import AbelianType, BudgetExceeded, type_from_order_statistics

Word = Sequence[tuple[int, int]]


class FiniteGroup:
    """A finite group as a Cayley table on element indices."""

    def __init__(self, table: np.ndarray, labels: Sequence[Hashable] | None = None, name: str = "G"):
        table = np.asarray(table, dtype=np.int32)
        n = table.shape[0]
        if table.shape != (n, n) or not (table[0] == np.arange(n)).all():
            raise ValueError("element 0 must be the identity of the Cayley table")
        table.setflags(write=False)
        self.table = table
        self.rows: list[list[int]] = table.tolist()
        self.order = n
        self.labels = list(labels) if labels is not None else list(range(n))
        self.name = name

    @classmethod
    def from_elements(
        cls,
        elements: Sequence[Hashable],
        mul: Callable[[Hashable, Hashable], Hashable],
        name: str = "G",
    ) -> "FiniteGroup":
        """Tabulate ``mul`` on ``elements``; the first element must be the identity."""
        index = {e: i for i, e in enumerate(elements)}
        if len(index) != len(elements):
            raise ValueError("duplicate elements")
        table = np.empty((len(elements), len(elements)), dtype=np.int32)
        for i, a in enumerate(elements):
            row = table[i]
            for j, b in enumerate(elements):
                row[j] = index[mul(a, b)]
        return cls(table, labels=elements, name=name)

    @classmethod
    def from_abelian(cls, t: AbelianType) -> "FiniteGroup":
        labels = [t.element(i) for i in range(t.order)]
        return cls(t.add_table, labels=labels, name=str(t))

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"

    def mul(self, a: int, b: int) -> int:
        return self.rows[a][b]

    @cached_property
    def inverses(self) -> list[int]:
        inv = np.argmin(self.table, axis=1)
        return inv.tolist()

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inverses[a], -k
        out = 0
        rows = self.rows
        while k:
            if k & 1:
                out = rows[out][a]
            a = rows[a][a]
            k >>= 1
        return out

    def evaluate(self, word: Word, images: Sequence[int]) -> int:
        out = 0
        for g, e in word:
            out = self.rows[out][self.power(images[g], e)]
        return out

    @cached_property
    def element_orders(self) -> list[int]:
        rows = self.rows
        orders = [0] * self.order
        for a in range(self.order):
            x, k = a, 1
            while x:
                x = rows[x][a]
                k += 1
            orders[a] = k
        return orders

    @cached_property
    def prime(self) -> int | None:
        n = self.order
        if n == 1:
            return None
        q = next(q for q in range(2, n + 1) if n % q == 0)
        while n % q == 0:
            n //= q
        return q if n == 1 else None

    def order_statistics(self) -> dict[int, int]:
        stats: dict[int, int] = {}
        for o in self.element_orders:
            stats[o] = stats.get(o, 0) + 1
        return dict(sorted(stats.items()))

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*self.element_orders)

    @cached_property
    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())

    @cached_property
    def center(self) -> list[int]:
        return np.flatnonzero((self.table == self.table.T).all(axis=1)).tolist()

    def closure(self, gens: Sequence[int]) -> list[int]:
        """Elements of the subgroup generated by ``gens`` (identity first)."""
        rows = self.rows
        seen = {0}
        out = [0]
        gens = [g for g in gens if g]
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                r = rows[x]
                for g in gens:
                    y = r[g]
                    if y not in seen:
                        seen.add(y)
                        out.append(y)
                        nxt.append(y)
            frontier = nxt
        return out

    @cached_property
    def derived_subgroup(self) -> list[int]:
        inv = np.asarray(self.inverses)
        left = self.table[np.ix_(inv, inv)]
        comms = np.unique(self.table[left, self.table])
        return sorted(self.closure(comms.tolist()))

    @cached_property
    def frattini_subgroup(self) -> list[int]:
        """Phi(G) = G^p [G, G] for a p-group."""
        p = self.prime
        if p is None:
            raise ValueError("Frattini subgroup implemented for p-groups only")
        powers = {self.power(a, p) for a in range(self.order)}
        return sorted(self.closure(sorted(powers) + self.derived_subgroup))

    @cached_property
    def _frattini_coords(self) -> tuple[int, list[tuple[int, ...]]]:
        """Coordinates in G/Phi(G) ~ F_p^d of every element."""
        p = self.prime
        phi = self.frattini_subgroup
        coset = [-1] * self.order
        reps: list[int] = []
        for a in range(self.order):
            if coset[a] < 0:
                for f in phi:
                    coset[self.rows[a][f]] = len(reps)
                reps.append(a)
        d = round(math.log(len(reps), p)) if len(reps) > 1 else 0
        # greedy basis of the elementary abelian quotient
        basis: list[int] = []
        span = {coset[0]: (0,) * 0}
        for a in range(self.order):
            if len(basis) == d:
                break
            if coset[a] in span:
                continue
            basis.append(a)
            span = {}
            k = len(basis)
            for digits in np.ndindex(*([p] * k)):
                x = 0
                for b, e in zip(basis, digits):
                    x = self.rows[x][self.power(b, e)]
                span[coset[x]] = tuple(int(v) for v in digits)
        coords = [tuple(span[coset[a]]) for a in range(self.order)]
        return d, coords

    @property
    def rank(self) -> int:
        """Minimal number of generators of a p-group."""
        return self._frattini_coords[0]

    def generates(self, elems: Sequence[int]) -> bool:
        """Whether ``elems`` generate the whole p-group (Burnside basis theorem)."""
        d, coords = self._frattini_coords
        p = self.prime
        rowsF = [list(coords[a]) for a in elems]
        return _rank_mod_p(rowsF, p) == d

    def fingerprint(self) -> dict:
        return {
            "order": self.order,
            "order_statistics": {str(k): v for k, v in self.order_statistics().items()},
            "abelian": self.is_abelian,
            "center_order": len(self.center),
            "derived_order": len(self.derived_subgroup),
            "exponent": self.exponent,
        }

    def abelian_invariants(self) -> tuple[int, ...]:
        """Invariant-factor exponents of an abelian p-group."""
        if not self.is_abelian or self.prime is None:
            raise ValueError("not an abelian p-group")
        return type_from_order_statistics(self.prime, self.order_statistics())

    def generating_sequence(self) -> list[int]:
        """Greedy generators: largest order first, then smallest index."""
        order = sorted(range(1, self.order), key=lambda a: (-self.element_orders[a], a))
        gens: list[int] = []
        sub = {0}
        for a in order:
            if len(sub) == self.order:
                break
            if a in sub:
                continue
            gens.append(a)
            sub = set(self.closure(gens))
        return gens


def _rank_mod_p(rows: list[list[int]], p: int) -> int:
    rows = [r[:] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [(v * inv) % p for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] % p:
                f = rows[i][col]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


# -- homomorphism search -----------------------------------------------------


def _extend(G: FiniteGroup, H: FiniteGroup, gens: Sequence[int], images: Sequence[int]) -> dict[int, int] | None:
    """The injective homomorphism <gens> -> H with gens -> images, if it exists.

    Defines f along a breadth-first spanning tree and checks
    f(g x) = f(g) f(x) on every element g and generator x; that suffices
    for a homomorphism because every element is a positive word.
    """
    f = {0: 0}
    used = {0}
    queue = [0]
    Grows, Hrows = G.rows, H.rows
    for g in queue:
        fg = Hrows[f[g]]
        grow = Grows[g]
        for x, y in zip(gens, images):
            gx = grow[x]
            target = fg[y]
            have = f.get(gx)
            if have is None:
                if target in used:
                    return None
                f[gx] = target
                used.add(target)
                queue.append(gx)
            elif have != target:
                return None
    return f


def _hom_search(G: FiniteGroup, H: FiniteGroup, gens: Sequence[int], *, first_only: bool, budget: int):
    """Enumerate injective homomorphisms <gens> -> H by images of ``gens``.

    Candidate images have the generator's order and avoid the image of the
    subgroup generated so far; they are tried in index order.
    """
    by_order: dict[int, list[int]] = {}
    for b in range(H.order):
        by_order.setdefault(H.element_orders[b], []).append(b)
    found: list[dict[int, int]] = []
    count = 0
    nodes = 0

    def rec(k: int, images: list[int], image_set: set[int]) -> bool:
        nonlocal count, nodes
        for y in by_order.get(G.element_orders[gens[k]], []):
            if y in image_set:
                continue
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(f"homomorphism search exceeded {budget} nodes")
            f = _extend(G, H, gens[: k + 1], images + [y])
            if f is None:
                continue
            if k + 1 == len(gens):
                count += 1
                if first_only:
                    found.append(f)
                    return True
            elif rec(k + 1, images + [y], set(f.values())):
                return True
        return False

    rec(0, [], {0})
    return found, count


def find_isomorphism(G: FiniteGroup, H: FiniteGroup, budget: int = 10**7) -> dict[int, int] | None:
    """An isomorphism G -> H as a full element map, or None."""
    if not invariants_match(G, H):
        return None
    gens = G.generating_sequence()
    found, _ = _hom_search(G, H, gens, first_only=True, budget=budget)
    for f in found:
        if len(f) == G.order:
            return f
    return None


def count_isomorphisms(G: FiniteGroup, H: FiniteGroup, budget: int = 10**8) -> int:
    """Number of isomorphisms G -> H (|Aut G| when H = G), by exhaustive image search."""
    if not invariants_match(G, H):
        return 0
    gens = G.generating_sequence()
    _, count = _hom_search(G, H, gens, first_only=False, budget=budget)
    return count


def invariants_match(G: FiniteGroup, H: FiniteGroup) -> bool:
    return (
        G.order == H.order
        and G.is_abelian == H.is_abelian
        and G.order_statistics() == H.order_statistics()
        and len(G.center) == len(H.center)
        and len(G.derived_subgroup) == len(H.derived_subgroup)
    )


@dataclass
class IsoResult:
    isomorphic: bool
    generators: list[int]
    images: list[int]

    def __bool__(self):
        return self.isomorphic


def iso_check(G: FiniteGroup, H: FiniteGroup, budget: int = 10**7) -> IsoResult:
    """Decide G ~ H; on success return a generator-image witness.

    The witness is re-verified on every (element, generator) pair before
    it is returned.
    """
    f = find_isomorphism(G, H, budget=budget)
    if f is None:
        return IsoResult(False, [], [])
    gens = G.generating_sequence()
    images = [f[g] for g in gens]
    if _extend(G, H, gens, images) != f or len(set(f.values())) != H.order:
        raise AssertionError("isomorphism witness failed verification")
    return IsoResult(True, gens, images)


# -- presentations -------------------------------------------------------------


@dataclass
class Presentation:
    """Generators inside a concrete group together with defining relations.

    ``relations`` are pairs of words ``[(gen, exponent), ...]``.  They must
    define the group, so relation-preserving generator images give
    homomorphisms.
    """

    group: FiniteGroup
    generators: list[int]
    relations: list[tuple[Word, Word]]

    def check(self) -> None:
        G = self.group
        for lhs, rhs in self.relations:
            if G.evaluate(lhs, self.generators) != G.evaluate(rhs, self.generators):
                raise ValueError("presentation relation fails in its own group")
        if len(G.closure(self.generators)) != G.order:
            raise ValueError("presentation generators do not generate the group")


def count_automorphisms(pres: Presentation, budget: int = 10**8) -> int:
    """|Aut G| by backtracking over relation-preserving generator images.

    Images of each generator range over elements of the same order; a
    relation is checked as soon as all its generators are assigned.  A
    relation-preserving assignment is an endomorphism, and it is bijective
    iff the images generate G.
    """
    G = pres.group
    gens = pres.generators
    m = len(gens)
    rel_at: list[list[tuple[Word, Word]]] = [[] for _ in range(m)]
    for lhs, rhs in pres.relations:
        last = max(g for g, _ in list(lhs) + list(rhs))
        rel_at[last].append((lhs, rhs))
    cands = []
    for g in gens:
        o = G.element_orders[g]
        cands.append([b for b in range(G.order) if G.element_orders[b] == o])
    count = 0
    nodes = 0
    images = [0] * m

    def rec(k: int):
        nonlocal count, nodes
        if k == m:
            if G.generates(images):
                count += 1
            return
        for y in cands[k]:
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(f"automorphism search exceeded {budget} nodes")
            images[k] = y
            if all(G.evaluate(l, images) == G.evaluate(r, images) for l, r in rel_at[k]):
                rec(k + 1)

    rec(0)
    return count
