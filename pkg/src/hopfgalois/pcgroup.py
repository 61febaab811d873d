"""Class-2 p-groups whose commutator subgroup is central of order p.

A presentation has a central generator ``c`` of order p and generators
``beta_1, ..., beta_s`` with

    beta_i^(m_i) = c^(t_i)              (m_i = gen_orders[i])
    beta_i beta_j beta_i^-1 = c^(k_ij) beta_j

Every element has the unique normal form ``c^t beta_1^a_1 ... beta_s^a_s``
with ``0 <= t < p`` and ``0 <= a_i < m_i``; it is stored as the tuple
``(t, a_1, ..., a_s)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

from .abelian import BudgetExceeded, is_prime
from .groups import FiniteGroup, Presentation, count_automorphisms

PcElement = tuple[int, ...]


@dataclass(frozen=True)
class PcPresentation:
    p: int
    gen_orders: tuple[int, ...]
    power_tails: tuple[int, ...]
    comm: tuple[tuple[int, ...], ...]
    name: str = ""

    def __post_init__(self):
        p = self.p
        if not is_prime(p) or p == 2:
            raise ValueError(f"p must be an odd prime, got {p}")
        s = len(self.gen_orders)
        object.__setattr__(self, "gen_orders", tuple(int(m) for m in self.gen_orders))
        object.__setattr__(self, "power_tails", tuple(int(t) % p for t in self.power_tails))
        object.__setattr__(self, "comm", tuple(tuple(int(k) % p for k in row) for row in self.comm))
        for m in self.gen_orders:
            if m < p or p ** round(math.log(m, p)) != m:
                raise ValueError(f"generator order {m} is not a positive power of {p}")
        if len(self.power_tails) != s or len(self.comm) != s or any(len(r) != s for r in self.comm):
            raise ValueError("power tails and commutator table must match the generator count")
        for i in range(s):
            if self.comm[i][i]:
                raise ValueError(f"k[{i}][{i}] must vanish")
            for j in range(s):
                if (self.comm[i][j] + self.comm[j][i]) % p:
                    raise ValueError(f"commutator table is not antisymmetric at ({i}, {j})")
        if not any(any(row) for row in self.comm):
            raise ValueError("presentation is abelian; use an abelian type instead")

    @property
    def s(self) -> int:
        return len(self.gen_orders)

    @property
    def order(self) -> int:
        return self.p * math.prod(self.gen_orders)

    def spec(self) -> dict:
        return {
            "kind": "pc",
            "p": self.p,
            "gen_orders": list(self.gen_orders),
            "power_tails": list(self.power_tails),
            "comm": [list(r) for r in self.comm],
        }

    # -- elements ----------------------------------------------------------

    @property
    def identity(self) -> PcElement:
        return (0,) * (self.s + 1)

    def gen(self, i: int) -> PcElement:
        """beta_i (0-based)."""
        out = [0] * (self.s + 1)
        out[i + 1] = 1
        return tuple(out)

    @property
    def central(self) -> PcElement:
        return (1,) + (0,) * self.s

    def elements(self) -> list[PcElement]:
        """All normal forms, identity first, in lexicographic order."""
        ranges = [range(self.p)] + [range(m) for m in self.gen_orders]
        return [tuple(x) for x in itertools.product(*ranges)]

    @cached_property
    def group(self) -> FiniteGroup:
        return FiniteGroup.from_elements(self.elements(), self.mul, name=self.name or "pc")

    @cached_property
    def presentation(self) -> Presentation:
        """Defining relations on (c, beta_1, ..., beta_s) inside :attr:`group`.

        ``c`` comes first so that relations prune the image search early.
        """
        G = self.group
        index = {e: i for i, e in enumerate(G.labels)}
        s = self.s
        gens = [index[self.central]] + [index[self.gen(i)] for i in range(s)]
        rels = [([(0, self.p)], [])]
        for i in range(1, s + 1):
            rels.append(([(i, self.gen_orders[i - 1])], [(0, self.power_tails[i - 1])]))
            rels.append(([(0, 1), (i, 1)], [(i, 1), (0, 1)]))
        for i in range(1, s + 1):
            for j in range(i + 1, s + 1):
                rels.append(([(i, 1), (j, 1), (i, -1)], [(0, self.comm[i - 1][j - 1]), (j, 1)]))
        pres = Presentation(G, gens, rels)
        pres.check()
        return pres

    # -- collection ----------------------------------------------------------

    def mul(self, x: PcElement, y: PcElement) -> PcElement:
        """Collect x*y to normal form.

        Moving beta_i^b left past beta_j^a (j > i) contributes c^(a b k_ji);
        exponents that reach m_i are reduced with beta_i^(m_i) = c^(t_i).
        """
        p, s, k = self.p, self.s, self.comm
        t = x[0] + y[0]
        for i in range(s):
            bi = y[i + 1]
            if bi:
                for j in range(i + 1, s):
                    aj = x[j + 1]
                    if aj:
                        t += aj * bi * k[j][i]
        out = [0] * (s + 1)
        for i in range(s):
            e = x[i + 1] + y[i + 1]
            m = self.gen_orders[i]
            if e >= m:
                t += self.power_tails[i] * (e // m)
                e %= m
            out[i + 1] = e
        out[0] = t % p
        return tuple(out)

    def inv(self, x: PcElement) -> PcElement:
        s = self.s
        b = [(-x[i + 1]) % self.gen_orders[i] for i in range(s)]
        partial = self.mul(x, (0, *b))
        return ((-partial[0]) % self.p, *b)

    def pow(self, x: PcElement, k: int) -> PcElement:
        if k < 0:
            x, k = self.inv(x), -k
        out = self.identity
        while k:
            if k & 1:
                out = self.mul(out, x)
            x = self.mul(x, x)
            k >>= 1
        return out

    def arith(self, x: PcElement, y: PcElement | None = None, which: str = "mul", k: int = 1) -> PcElement:
        if which == "mul":
            return self.mul(x, y)
        if which == "inv":
            return self.inv(x)
        if which == "pow":
            return self.pow(x, k)
        raise ValueError(f"unknown operation {which!r}")

    def commutator(self, x: PcElement, y: PcElement) -> PcElement:
        """x y x^-1 y^-1."""
        return self.mul(self.mul(x, y), self.mul(self.inv(x), self.inv(y)))

    def element_order(self, x: PcElement) -> int:
        order = 1
        while x != self.identity:
            x = self.pow(x, self.p)
            order *= self.p
        return order

    def order_statistics(self, budget: int = 5**4) -> dict[int, int]:
        if self.order > budget:
            raise BudgetExceeded(f"group order {self.order} exceeds enumeration budget {budget}")
        stats: dict[int, int] = {}
        for x in self.elements():
            o = self.element_order(x)
            stats[o] = stats.get(o, 0) + 1
        return dict(sorted(stats.items()))

    def derived_subgroup(self) -> list[PcElement]:
        G = self.group
        return [G.labels[i] for i in G.derived_subgroup]

    def aut_count(self, budget: int = 10**8) -> int:
        """|Aut N| by relation-preserving images of (c, beta_1..beta_s)."""
        return count_automorphisms(self.presentation, budget=budget)


def pc_arith(pres: PcPresentation, x, y=None, which="mul", k=1) -> PcElement:
    return pres.arith(x, y, which, k)


def pc_element_order(pres: PcPresentation, x: PcElement) -> int:
    return pres.element_order(x)


def pc_order_statistics(pres: PcPresentation) -> dict[int, int]:
    return pres.order_statistics()


def derived_subgroup(pres: PcPresentation) -> list[PcElement]:
    return pres.derived_subgroup()


def pc_aut_count(pres: PcPresentation) -> int:
    return pres.aut_count()
