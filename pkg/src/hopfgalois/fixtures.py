"""Named groups: the five class-2 families, the order-p^4 negative example,
and parsing of JSON group specs.

Family parameters follow the presentations they are named after, so the
group orders are p^n (family 1), p^(2n) (family 2) and p^(n+2)
(families 3-5).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Union

from .abelian import AbelianType
from .groups import FiniteGroup, Presentation
from .pcgroup import PcPresentation


def _comm(s: int, p: int, entries: dict[tuple[int, int], int]) -> tuple[tuple[int, ...], ...]:
    k = [[0] * s for _ in range(s)]
    for (i, j), v in entries.items():
        k[i][j] = v % p
        k[j][i] = (-v) % p
    return tuple(tuple(r) for r in k)


def family(fid: int, p: int, n: int) -> PcPresentation:
    """Pc presentation of a family member; generators beta_i are listed with
    non-increasing orders modulo the commutator subgroup."""
    name = f"family {fid}, p={p}, n={n}"
    if fid == 1:
        # C_{p^(n-1)} x| C_p: b a b^-1 = a^(1+p^(n-2)); c = a^(p^(n-2))
        if n < 3:
            raise ValueError("family 1 needs n >= 3")
        return PcPresentation(p, (p ** (n - 2), p), (1, 0), _comm(2, p, {(1, 0): 1}), name)
    if fid == 2:
        # <a, b : a^(p^n) = b^(p^n) = 1, b a b^-1 = a^(1+p^(n-1))>; beta = (b, a), c = a^(p^(n-1))
        if n < 2:
            raise ValueError("family 2 needs n >= 2")
        return PcPresentation(p, (p**n, p ** (n - 1)), (0, 1), _comm(2, p, {(0, 1): 1}), name)
    if fid in (3, 4):
        # beta = (a, b, c) with c_comm = a^(p^(n-1))
        if n < 2:
            raise ValueError(f"family {fid} needs n >= 2")
        # family 3: c b c^-1 = b a^(p^(n-1)); family 4: c a c^-1 = a^(1+p^(n-1))
        entries = {(2, 1): 1} if fid == 3 else {(2, 0): 1}
        return PcPresentation(p, (p ** (n - 1), p, p), (1, 0, 0), _comm(3, p, entries), name)
    if fid == 5:
        # c a c^-1 = a b with b central of order p; beta = (a, c), c_comm = b
        if n < 2:
            raise ValueError("family 5 needs n >= 2")
        return PcPresentation(p, (p**n, p), (0, 0), _comm(2, p, {(1, 0): 1}), name)
    raise ValueError(f"unknown family {fid}")


def heisenberg(p: int) -> PcPresentation:
    """The nonabelian group of order p^3 and exponent p."""
    return PcPresentation(p, (p, p), (0, 0), _comm(2, p, {(0, 1): 1}), f"heisenberg, p={p}")


def family_abelian_partner(fid: int, p: int, n: int) -> AbelianType:
    """The abelian group the family is paired with."""
    exps = {1: (n - 1, 1), 2: (n, n), 3: (n, 1, 1), 4: (n, 1, 1), 5: (n, 1, 1)}[fid]
    return AbelianType(p, exps)


@dataclass(frozen=True)
class RemarkGroup:
    """<a, b, c : a^(p^2) = b^p = c^p = 1, b a b^-1 = a^(1+p), c a c^-1 = a b, c b c^-1 = b>.

    Order p^4 with derived subgroup <a^p, b> of order p^2.  Built as
    (C_{p^2} x| C_p) x| C_p; elements are triples (i, j, k) = a^i b^j c^k.
    """

    p: int

    @property
    def name(self) -> str:
        return f"remark group, p={self.p}"

    @property
    def order(self) -> int:
        return self.p**4

    def spec(self) -> dict:
        return {"kind": "family", "id": "remark", "p": self.p}

    def _k_mul(self, x, y):
        p = self.p
        q = p * p
        return ((x[0] + y[0] * pow(1 + p, x[1], q)) % q, (x[1] + y[1]) % p)

    @cached_property
    def _sigma_powers(self) -> list[dict]:
        p = self.p
        K = [(i, j) for i in range(p * p) for j in range(p)]
        ab = (1, 1)
        powers_ab = [(0, 0)]
        for _ in range(p * p):
            powers_ab.append(self._k_mul(powers_ab[-1], ab))
        sigma = {x: self._k_mul(powers_ab[x[0]], (0, x[1])) for x in K}
        for x in K:
            for y in K:
                if sigma[self._k_mul(x, y)] != self._k_mul(sigma[x], sigma[y]):
                    raise AssertionError("conjugation by c is not an automorphism")
        out = [{x: x for x in K}]
        for _ in range(p - 1):
            out.append({x: sigma[out[-1][x]] for x in K})
        if any(sigma[out[-1][x]] != x for x in K):
            raise AssertionError("conjugation by c does not have order p")
        return out

    def mul(self, x, y):
        sig = self._sigma_powers[x[2]]
        i, j = self._k_mul((x[0], x[1]), sig[(y[0], y[1])])
        return (i, j, (x[2] + y[2]) % self.p)

    @cached_property
    def group(self) -> FiniteGroup:
        p = self.p
        elems = [(i, j, k) for i in range(p * p) for j in range(p) for k in range(p)]
        return FiniteGroup.from_elements(elems, self.mul, name=self.name)

    @cached_property
    def presentation(self) -> Presentation:
        G = self.group
        index = {e: i for i, e in enumerate(G.labels)}
        p = self.p
        gens = [index[(1, 0, 0)], index[(0, 1, 0)], index[(0, 0, 1)]]
        rels = [
            ([(0, p * p)], []),
            ([(1, p)], []),
            ([(2, p)], []),
            ([(1, 1), (0, 1), (1, -1)], [(0, 1 + p)]),
            ([(2, 1), (0, 1), (2, -1)], [(0, 1), (1, 1)]),
            ([(2, 1), (1, 1), (2, -1)], [(1, 1)]),
        ]
        pres = Presentation(G, gens, rels)
        pres.check()
        return pres

    def aut_count(self) -> int:
        from .groups import count_automorphisms

        return count_automorphisms(self.presentation)

    def order_statistics(self) -> dict[int, int]:
        return self.group.order_statistics()

    def derived_subgroup(self) -> list:
        G = self.group
        return [G.labels[i] for i in G.derived_subgroup]


def remark_abelian_partner(p: int) -> AbelianType:
    return AbelianType(p, (2, 1, 1))


GroupHandle = Union[AbelianType, PcPresentation, RemarkGroup]


def parse_group_spec(spec) -> GroupHandle:
    """Accept a dict, an inline JSON string, or a path to a JSON file."""
    if isinstance(spec, (AbelianType, PcPresentation, RemarkGroup)):
        return spec
    if isinstance(spec, (str, Path)):
        text = str(spec).strip()
        if not text.startswith("{") and Path(text).exists():
            text = Path(text).read_text()
        spec = json.loads(text)
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError(f"not a group spec: {spec!r}")
    kind = spec["kind"]
    if kind == "abelian":
        return AbelianType(int(spec["p"]), tuple(spec["exponents"]))
    if kind == "pc":
        return PcPresentation(
            int(spec["p"]),
            tuple(spec["gen_orders"]),
            tuple(spec.get("power_tails", [0] * len(spec["gen_orders"]))),
            tuple(tuple(r) for r in spec["comm"]),
        )
    if kind == "family":
        if str(spec["id"]) == "remark":
            return RemarkGroup(int(spec["p"]))
        return family(int(spec["id"]), int(spec["p"]), int(spec["n"]))
    raise ValueError(f"unknown group kind {kind!r}")


def group_spec(handle: GroupHandle) -> dict:
    return handle.spec()


def to_finite_group(handle: GroupHandle) -> FiniteGroup:
    if isinstance(handle, AbelianType):
        return FiniteGroup.from_abelian(handle)
    if isinstance(handle, (PcPresentation, RemarkGroup)):
        return handle.group
    if isinstance(handle, FiniteGroup):
        return handle
    raise TypeError(f"cannot build a group from {handle!r}")


def handle_label(handle: GroupHandle) -> str:
    if isinstance(handle, AbelianType):
        return f"abelian {list(handle.exponents)}"
    return handle.name or "pc"


def catalog(p: int, order: int) -> list[tuple[str, GroupHandle]]:
    """Nonabelian fixtures of the given order, for type identification."""
    m = round(math.log(order, p))
    out: list[tuple[str, GroupHandle]] = []
    if m >= 3:
        out.append((f"family 1, p={p}, n={m}", family(1, p, m)))
    if m == 3:
        out.append((f"heisenberg, p={p}", heisenberg(p)))
    if m % 2 == 0 and m >= 4:
        out.append((f"family 2, p={p}, n={m // 2}", family(2, p, m // 2)))
    if m >= 4:
        for fid in (3, 4, 5):
            out.append((f"family {fid}, p={p}, n={m - 2}", family(fid, p, m - 2)))
    if m == 4:
        out.append((f"remark group, p={p}", RemarkGroup(p)))
    return out
