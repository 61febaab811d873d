"""Searching and enumerating regular subgroups of Hol(N).

The search is point-ordered.  A node is a subgroup H of N x| P (P the
automorphism pool) whose elements lie over distinct points.  Its children
are the subgroups <H, (x, f)> where x is the least point not covered by H
and f runs over P; children whose elements collide over a point are
dropped.  A regular subgroup R is reached along exactly one path (at each
step the element of R over x is forced), so every regular subgroup is
produced once and the node count does not depend on the order in which
candidates are tried.

With the Sylow restriction P is a Sylow p-subgroup of Aut(N).  If R is a
regular p-subgroup then gamma(R) is a p-subgroup of Aut(N), so some
conjugate (0, c) R (0, c)^-1 has gamma values in P; conjugation by (0, c)
preserves regularity and isomorphism type.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .abelian import (
    AbelianType,
    BudgetExceeded,
    aut_order,
    iter_aut_batches,
    matrix_group_closure,
    matrix_keys,
    order_statistics,
)
from .brace import brace_from_regular, identify_group, regular_from_gamma, gamma_from_regular
from .fixtures import GroupHandle, group_spec, handle_label, to_finite_group
from .groups import FiniteGroup, iso_check
from .holomorph import HolSubgroup, Holomorph, classify_action, p_part


# -- Sylow subgroup of Aut(N) -------------------------------------------------


def _sylow_generators(t: AbelianType) -> np.ndarray:
    """Elementary matrices spanning a Sylow p-subgroup of Aut(N).

    Within a block of equal exponents: unit entries above the diagonal,
    entries p below it and 1 + p on it.  Between blocks: entry (i, j) is
    p^(e_i - e_j) when e_i > e_j and 1 otherwise.
    """
    p, e, s = t.p, t.exponents, t.s
    gens = []
    for i in range(s):
        for j in range(s):
            m = np.eye(s, dtype=np.int64)
            if i == j:
                if e[i] < 2:
                    continue
                m[i, i] = 1 + p
            elif e[i] == e[j]:
                if i < j:
                    m[i, j] = 1
                elif e[i] >= 2:
                    m[i, j] = p
                else:
                    continue
            else:
                m[i, j] = p ** max(e[i] - e[j], 0)
            gens.append(m % np.asarray(t.moduli)[:, None])
    return np.stack(gens) if gens else np.zeros((0, s, s), dtype=np.int64)


@dataclass
class AutSylow:
    t: AbelianType
    order: int
    elements: np.ndarray
    method: str


def sylow_p_of_aut(t: AbelianType, budget: int = 10**6) -> AutSylow:
    """A Sylow p-subgroup of Aut(N), enumerated.

    Built from explicit elementary generators; its closure is checked to be
    a p-group of order equal to the p-part of |Aut(N)|.
    """
    cached = t._cache.get("aut_sylow")
    if cached is not None:
        return cached
    target = p_part(aut_order(t), t.p)
    if target > budget:
        raise BudgetExceeded(f"Sylow subgroup of order {target} exceeds budget {budget}")
    gens = _sylow_generators(t)
    elems = matrix_group_closure(t, gens, cap=target) if len(gens) else np.eye(t.s, dtype=np.int64)[None]
    if len(elems) != target:
        raise AssertionError(f"Sylow generators span {len(elems)} elements, expected {target}")
    elems.setflags(write=False)
    out = AutSylow(t, target, elems, "elementary generators")
    t._cache["aut_sylow"] = out
    return out


def ambient_holomorph(t: AbelianType, restrict: bool) -> Holomorph:
    key = "hol_sylow" if restrict else "hol_full"
    hol = t._cache.get(key)
    if hol is None:
        if restrict:
            hol = Holomorph(t, sylow_p_of_aut(t).elements, name=f"{t} x| Syl_{t.p}(Aut)")
        else:
            if t.order * aut_order(t) > 10**6:
                raise BudgetExceeded(f"|Hol({t})| exceeds the unrestricted enumeration budget 10^6")
            hol = Holomorph(t)
        t._cache[key] = hol
    return hol


# -- target description ------------------------------------------------------------


@dataclass
class TargetInfo:
    handle: GroupHandle
    group: FiniteGroup
    order: int
    abelian: bool
    stats: dict[int, int]
    exponent: int

    @classmethod
    def of(cls, handle: GroupHandle) -> "TargetInfo":
        if isinstance(handle, AbelianType):
            G = FiniteGroup.from_abelian(handle)
            return cls(handle, G, handle.order, True, order_statistics(handle), handle.p ** handle.exponents[0])
        G = to_finite_group(handle)
        return cls(handle, G, G.order, G.is_abelian, G.order_statistics(), G.exponent)


# -- backtracking ----------------------------------------------------------------


@dataclass
class _Node:
    elems: list
    owner: list
    gens: list
    orders: list


class _Backtracker:
    def __init__(self, hol: Holomorph, target: TargetInfo | None, order: np.ndarray, max_nodes: int | None,
                 first_only: bool, deadline: float | None):
        self.hol = hol
        self.target = target
        self.cand = order
        self.max_nodes = max_nodes
        self.first_only = first_only
        self.deadline = deadline
        self.nodes = 0
        self.tried = 0
        self.found: list[HolSubgroup] = []
        self.abort = lambda: False
        act = hol.act[order]
        self.act_cand = act
        self.add = np.asarray(hol.t.add_table)

    def _tick(self):
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise BudgetExceeded(f"search exceeded {self.max_nodes} nodes")
        if self.deadline is not None and (self.nodes & 255) == 0 and time.monotonic() > self.deadline:
            raise BudgetExceeded("search exceeded its time limit")

    def root(self) -> _Node:
        owner = [None] * self.hol.N
        owner[0] = (0, 0)
        return _Node([(0, 0)], owner, [], [1])

    def candidates(self, node: _Node) -> tuple[int, list[int]]:
        """Least uncovered point and the pool indices surviving the point test
        x + f(pi(H)) disjoint from pi(H)."""
        owner = node.owner
        x = next(i for i, o in enumerate(owner) if o is None)
        pts = np.fromiter((e[0] for e in node.elems), dtype=np.int64, count=len(node.elems))
        covered = np.zeros(self.hol.N, dtype=bool)
        covered[pts] = True
        img = self.add[x][self.act_cand[:, pts]]
        ok = ~covered[img].any(axis=1)
        return x, self.cand[ok].tolist()

    def _element_order(self, g) -> int:
        hol, p = self.hol, self.hol.t.p
        o, q = 1, g
        while q != (0, 0):
            q = hol.power(q, p)
            o *= p
        return o

    def extend(self, node: _Node, g) -> _Node | None:
        hol = self.hol
        mul = hol.mul
        tgt = self.target
        if tgt is not None:
            og = self._element_order(g)
            if og > tgt.exponent:
                return None
            if tgt.abelian:
                for s in node.gens:
                    if mul(s, g) != mul(g, s):
                        return None
        elems = node.elems
        owner = list(node.owner)
        new = list(elems)
        orders = list(node.orders)

        def add_coset(r) -> bool:
            for h in elems:
                e = mul(h, r)
                if owner[e[0]] is not None:
                    return False
                owner[e[0]] = e
                new.append(e)
            return True

        if not add_coset(g):
            return None
        gens = node.gens + [g]
        reps = [(0, 0), g]
        i = 0
        while i < len(reps):
            r = reps[i]
            i += 1
            for s in gens:
                u = mul(r, s)
                o = owner[u[0]]
                if o == u:
                    continue
                if o is not None or not add_coset(u):
                    return None
                reps.append(u)
        if tgt is not None:
            orders.extend(self._element_order(e) for e in new[len(elems):])
            counts: dict[int, int] = {}
            for o in orders:
                counts[o] = counts.get(o, 0) + 1
            if any(c > tgt.stats.get(o, 0) for o, c in counts.items()):
                return None
        return _Node(new, owner, gens, orders)

    def leaf(self, node: _Node) -> bool:
        sub = HolSubgroup(self.hol, node.gens, node.elems)
        tgt = self.target
        if tgt is not None:
            G = sub.group
            if tgt.abelian:
                if not G.is_abelian or G.order_statistics() != tgt.stats:
                    return False
            elif not iso_check(G, tgt.group):
                return False
        self.found.append(sub)
        return True

    def dfs(self, node: _Node) -> bool:
        """Returns True when a witness was found and the search should stop."""
        self._tick()
        if len(node.elems) == self.hol.N:
            return self.leaf(node) and self.first_only
        if self.abort():
            return True
        x, cands = self.candidates(node)
        for a in cands:
            self.tried += 1
            child = self.extend(node, (x, a))
            if child is not None and self.dfs(child):
                return True
        return False


def candidate_order(hol: Holomorph, seed: int | None) -> np.ndarray:
    """Pool indices in trial order: by index, or a seeded permutation
    keeping the identity first."""
    order = np.arange(hol.M)
    if seed:
        rng = np.random.default_rng(seed)
        order = np.r_[0, 1 + rng.permutation(hol.M - 1)]
    return order


@dataclass
class SearchSpec:
    ambient: AbelianType
    target: GroupHandle | None = None
    sylow_restrict: bool = True
    max_nodes: int | None = None
    time_limit: float | None = None
    seed: int | None = None
    threads: int = 1


@dataclass
class SearchResult:
    found: bool
    exhausted: bool
    witness: HolSubgroup | None
    nodes: int
    tried: int
    branches: int
    subgroups: list[HolSubgroup] = field(default_factory=list)

    def certificate(self, spec: SearchSpec, hol: Holomorph) -> dict:
        t = spec.ambient
        return {
            "space": f"regular subgroups of {hol.name}",
            "pool_order": hol.M,
            "restricted": spec.sylow_restrict,
            "nodes": self.nodes,
            "tried": self.tried,
            "exhausted": self.exhausted,
            "reduction": (
                f"gamma(R) of a regular p-subgroup R lies in a Sylow {t.p}-subgroup of Aut(N) "
                "after conjugation by an automorphism, which preserves the isomorphism type"
                if spec.sylow_restrict
                else "full holomorph"
            ),
        }


def _run(hol: Holomorph, target: TargetInfo | None, spec: SearchSpec, first_only: bool) -> SearchResult:
    order = candidate_order(hol, spec.seed)
    deadline = None if spec.time_limit is None else time.monotonic() + spec.time_limit
    top = _Backtracker(hol, target, order, spec.max_nodes, first_only, deadline)
    root = top.root()
    top._tick()
    if hol.N == 1:
        top.leaf(root)
        return SearchResult(bool(top.found), not first_only or not top.found, top.found[0] if top.found else None,
                            top.nodes, 0, 0, top.found)
    x, cands = top.candidates(root)
    state = {"best": math.inf}

    def branch(i: int):
        bt = _Backtracker(hol, target, order, spec.max_nodes, first_only, deadline)
        bt.abort = lambda: state["best"] < i
        bt.tried = 1
        child = bt.extend(root, (x, cands[i]))
        hit = child is not None and bt.dfs(child)
        if hit:
            state["best"] = min(state["best"], i)
        return hit, bt

    results: list[tuple[bool, _Backtracker]] = []
    if spec.threads > 1:
        with ThreadPoolExecutor(max_workers=spec.threads) as ex:
            futures = [ex.submit(branch, i) for i in range(len(cands))]
            for f in futures:
                results.append(f.result())
                if first_only and results[-1][0]:
                    for g in futures:
                        g.cancel()
                    break
    else:
        for i in range(len(cands)):
            results.append(branch(i))
            if first_only and results[-1][0]:
                break
    nodes, tried = top.nodes, 0
    found: list[HolSubgroup] = []
    for hit, bt in results:
        nodes += bt.nodes
        tried += bt.tried
        found.extend(bt.found)
        if spec.max_nodes is not None and nodes > spec.max_nodes:
            raise BudgetExceeded(f"search exceeded {spec.max_nodes} nodes")
        if first_only and hit:
            break
    witness = found[0] if first_only and found else None
    return SearchResult(
        found=bool(found),
        exhausted=not (first_only and found),
        witness=witness,
        nodes=nodes,
        tried=tried,
        branches=len(cands),
        subgroups=found,
    )


def search_regular(spec: SearchSpec) -> SearchResult:
    """First regular subgroup of the (restricted) holomorph isomorphic to the target."""
    if spec.target is None:
        raise ValueError("search needs a target group")
    target = TargetInfo.of(spec.target)
    if target.order != spec.ambient.order:
        raise ValueError(f"|G| = {target.order} differs from |N| = {spec.ambient.order}")
    hol = ambient_holomorph(spec.ambient, spec.sylow_restrict)
    res = _run(hol, target, spec, first_only=True)
    if res.witness is not None:
        w = res.witness
        if not classify_action(w).regular or not iso_check(w.group, target.group):
            raise AssertionError("search witness failed verification")
    return res


def enumerate_regular(ambient: AbelianType, restrict: bool = True, threads: int = 1, seed: int | None = None,
                      max_nodes: int | None = None) -> SearchResult:
    """All regular subgroups of N x| P, each exactly once, sorted by canonical key."""
    spec = SearchSpec(ambient, None, restrict, max_nodes=max_nodes, seed=seed, threads=threads)
    hol = ambient_holomorph(ambient, restrict)
    if restrict and hol.order > 10**7:
        raise BudgetExceeded(f"|N x| Syl| = {hol.order} exceeds 10^7")
    res = _run(hol, None, spec, first_only=False)
    res.subgroups.sort(key=lambda s: s.canonical_key)
    keys = {s.canonical_key for s in res.subgroups}
    if len(keys) != len(res.subgroups):
        raise AssertionError("a regular subgroup was produced twice")
    return res


# -- conjugacy classes -----------------------------------------------------------


def canonical_form(sub: HolSubgroup, budget: int = 10**6, batch: int = 4096) -> tuple[int, ...]:
    """Lexicographically least sorted code tuple over all Aut(N)-conjugates.

    Conjugation by (0, c) maps (x, f) to (c x, c f c^-1).
    """
    hol = sub.hol
    t = hol.t
    n_aut = aut_order(t)
    if n_aut > budget:
        raise BudgetExceeded(f"|Aut| = {n_aut} exceeds conjugacy budget {budget}")
    from .abelian import batch_compose, batch_power

    pts = np.asarray([t.element(x) for x, _ in sub.elements], dtype=np.int64)
    mats = hol.mats[[a for _, a in sub.elements]]
    best: tuple[int, ...] | None = None
    for X in iter_aut_batches(t, batch=batch):
        Xinv = batch_power(t, X, n_aut - 1)
        moved = t.indices(np.einsum("bij,kj->bki", X, pts) % np.asarray(t.moduli))
        conj = batch_compose(t, batch_compose(t, X[:, None], mats[None]), Xinv[:, None])
        keys = matrix_keys(t, conj.reshape(-1, t.s, t.s)).reshape(len(X), -1)
        codes = np.sort(keys * t.order + moved, axis=1)
        first = np.lexsort(codes.T[::-1])[0]
        cand = tuple(int(v) for v in codes[first])
        if best is None or cand < best:
            best = cand
    return best


@dataclass
class ConjugacyClass:
    key: tuple[int, ...]
    members: list[int]


def classify_conjugacy(subs: Sequence[HolSubgroup], budget: int = 10**6) -> list[ConjugacyClass]:
    """Partition by Aut(N)-conjugacy; classes ordered by first member."""
    classes: dict[tuple[int, ...], ConjugacyClass] = {}
    for i, s in enumerate(subs):
        k = canonical_form(s, budget=budget)
        classes.setdefault(k, ConjugacyClass(k, [])).members.append(i)
    return list(classes.values())


# -- reports ------------------------------------------------------------------


def realizability_report(G: GroupHandle, N: AbelianType, restrict: bool = True, seed: int | None = None,
                         threads: int = 1, max_nodes: int | None = None) -> dict:
    target = TargetInfo.of(G)
    if target.order != N.order:
        raise ValueError("only the case |G| = |N| is supported")
    spec = SearchSpec(N, G, restrict, max_nodes=max_nodes, seed=seed, threads=threads)
    res = search_regular(spec)
    hol = ambient_holomorph(N, restrict)
    out = {
        "pair": {"G": group_spec(G), "N": N.spec()},
        "realizable": True if res.found else (False if res.exhausted else "unknown"),
        "witness": res.witness.witness() if res.witness is not None else None,
        "certificate": res.certificate(spec, hol),
    }
    if res.witness is not None:
        out["witness_checks"] = witness_checks(res.witness, target)
    return out


def witness_checks(w: HolSubgroup, target: TargetInfo | None = None) -> dict:
    """Regularity, isomorphism with the target, gamma round trip, brace axioms."""
    g = gamma_from_regular(w)
    back = regular_from_gamma(g, w.hol)
    b = brace_from_regular(w)
    out = {
        "regular": classify_action(w).regular,
        "gamma_round_trip": back._set == w._set,
        "brace_verified": bool(b.verified),
        "multiplicative_type": identify_group(w.group).as_json(),
    }
    if target is not None:
        out["isomorphic_to_target"] = bool(iso_check(w.group, target.group))
    return out


def census(ambient: AbelianType, restrict: bool = True, threads: int = 1, seed: int | None = None,
           lemma: bool = True, braces: bool = True) -> dict:
    """Enumerate, type and check every regular subgroup of the (restricted) holomorph."""
    from .brace import lemma_order_check

    res = enumerate_regular(ambient, restrict, threads=threads, seed=seed)
    types: dict[str, int] = {}
    abelian_types: set[str] = set()
    lemma_pass = 0
    lemma_fail = 0
    brace_ok = 0
    for s in res.subgroups:
        lab = identify_group(s.group)
        name = lab.label or f"unidentified {lab.fingerprint['order_statistics']}"
        types[name] = types.get(name, 0) + 1
        if lab.fingerprint["abelian"]:
            abelian_types.add(lab.label)
        if lemma:
            if lemma_order_check(s).passed:
                lemma_pass += 1
            else:
                lemma_fail += 1
        if braces:
            brace_from_regular(s)
            brace_ok += 1
    hol = ambient_holomorph(ambient, restrict)
    return {
        "ambient": ambient.spec(),
        "restricted": restrict,
        "pool_order": hol.M,
        "count": len(res.subgroups),
        "nodes": res.nodes,
        "types": dict(sorted(types.items())),
        "abelian_types": sorted(abelian_types),
        "only_ambient_abelian_type": abelian_types <= {f"abelian {list(ambient.exponents)}"},
        "lemma_pass": lemma_pass,
        "lemma_fail": lemma_fail,
        "braces_verified": brace_ok,
    }
