"""Canonical labelling of sparse random graphs through their 2-core.

Labels are built in four phases, each from isomorphism-invariant data only:

(a) a core vertex on a cycle gets the nabla sequence of its smallest shortest
    rooted cycle;
(b) a core vertex on no cycle gets, per incident core edge, the distance and
    label of the nearest cycle vertex in that direction;
(c) vertices of trees hanging off core vertex ``r`` get (label of ``r``, code of
    the tree rooted at ``r``, position in it);
(d) vertices of tree components get (tree code, ordinal among components with
    that code, position).

The only arbitrary choices (ordering of isomorphic sibling subtrees and of
isomorphic components) are realised by automorphisms, so the canonical form
does not depend on them.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from rigidcore.core import core_partition, diameter_below
from rigidcore.cycles import log_bound, min_cycle_label, _cycles_from
from rigidcore.graph import Graph
from rigidcore.signatures import nabla_all
from rigidcore.trees import free_tree_code, rooted_tree_code, subtree_adjacency

CYCLE, PATH, TREE, COMPONENT = range(4)


@dataclass
class Violation:
    prop: int          # which structural property failed: 1, 2 or 3
    message: str
    witness: Any = None

    def to_json(self) -> dict:
        return {"property": self.prop, "message": self.message, "witness": _jsonable(self.witness)}


def _jsonable(x):
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x


@dataclass
class CanonicalResult:
    labeling: list[int] | None = None          # vertex -> 1..n
    form: tuple[tuple[int, int], ...] | None = None
    violation: Violation | None = None
    warnings: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.violation is None

    def form_graph(self, n: int) -> Graph:
        return Graph.from_edges(n, self.form)


def _bridges(adj: list[list[int]], nodes: list[int]) -> set[tuple[int, int]]:
    """Bridges of the graph on ``nodes`` (iterative Tarjan low-link)."""
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    out = set()
    t = 0
    for s in nodes:
        if s in disc:
            continue
        disc[s] = low[s] = t
        t += 1
        stack = [(s, -1, iter(adj[s]))]
        while stack:
            u, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    continue
                if w in disc:
                    low[u] = min(low[u], disc[w])
                else:
                    disc[w] = low[w] = t
                    t += 1
                    stack.append((w, u, iter(adj[w])))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                if parent >= 0:
                    low[parent] = min(low[parent], low[u])
                    if low[u] > disc[parent]:
                        out.add((min(u, parent), max(u, parent)))
    return out


def _property_one(G: Graph, part) -> Violation | None:
    bound = log_bound(G.n)
    for t in part.pendant_trees:
        if len(t.vertices) > bound:
            return Violation(1, f"tree of size {len(t.vertices)} > {bound}", list(t.vertices))
    for comp in part.acyclic_components:
        if len(comp) > bound:
            return Violation(1, f"tree component of size {len(comp)} > {bound}", comp)
    return None


def _property_two(G: Graph) -> Violation | None:
    bound = math.log(G.n) / 2 if G.n > 1 else 0
    holds, ecc = diameter_below(G, bound)
    if holds:
        return None
    return Violation(2, f"diameter >= {bound:.3f}", ecc)


def _cycle_labels(G: Graph, core: list[int], on_cycle: dict[int, bool], nab):
    labels: dict[int, tuple] = {}
    for v in core:
        if not on_cycle[v]:
            continue
        mc = min_cycle_label(G, v, nab)
        if mc.tie:
            return None, Violation(3, f"two distinct smallest cycles at vertex {v}",
                                   [list(mc.cycle), list(mc.rival)])
        labels[v] = (CYCLE, len(mc.cycle), mc.signature)
    return labels, None


def _path_labels(G: Graph, core_set: set[int], on_cycle: dict[int, bool], labels: dict) -> dict:
    out = {}
    for v in core_set:
        if on_cycle[v]:
            continue
        entries = []
        for x in G.adj[v]:
            if x not in core_set:
                continue
            # breadth-first away from v until the first layer holding cycle vertices
            seen = {v, x}
            layer = [x]
            d = 1
            found = None
            while layer:
                hits = [labels[u] for u in layer if on_cycle[u]]
                if hits:
                    found = (d, min(hits))
                    break
                nxt = []
                for u in layer:
                    for w in G.adj[u]:
                        if w in core_set and w not in seen:
                            seen.add(w)
                            nxt.append(w)
                layer = nxt
                d += 1
            assert found is not None, f"core vertex {v} has a branch without cycles"
            entries.append(found)
        assert len(entries) >= 2, f"core vertex {v} has fewer than two anchors"
        out[v] = (PATH, tuple(sorted(entries)))
    return out


def check_structural_properties(G: Graph, eager: bool = False) -> list[Violation]:
    """Violations of the three structural properties (empty list: all hold).

    Property (3) is checked lazily, i.e. on exactly the comparisons the labelling
    needs; ``eager`` also compares all pairs of rooted cycles of length up to
    ``max(3, ceil(ln n))`` (small graphs only).
    """
    out = []
    part = core_partition(G)
    v1 = _property_one(G, part)
    if v1:
        out.append(v1)
    v2 = _property_two(G)
    if v2:
        out.append(v2)
    result = canonical_label(G)
    if result.violation is not None and result.violation.prop == 3:
        out.append(result.violation)
    elif eager:
        v3 = _eager_total_order(G)
        if v3:
            out.append(v3)
    return out


def _eager_total_order(G: Graph) -> Violation | None:
    nab = nabla_all(G)
    seen: dict[tuple, tuple] = {}
    for k in range(3, max(3, log_bound(G.n)) + 1):
        for v in range(G.n):
            for cyc in _cycles_from(G, v, k):
                key = tuple(nab[x] for x in cyc)
                if key in seen and seen[key] != cyc:
                    return Violation(3, "two rooted cycles tie", [list(seen[key]), list(cyc)])
                seen.setdefault(key, cyc)
    return None


def canonical_label(G: Graph, strict: bool = False) -> CanonicalResult:
    """Canonical labelling, or the structural property whose failure stopped it."""
    n = G.n
    part = core_partition(G)
    v1 = _property_one(G, part)
    if v1:
        return CanonicalResult(violation=v1)
    warnings = []
    v2 = _property_two(G)
    if v2:
        if strict:
            return CanonicalResult(violation=v2)
        warnings.append(v2)

    core = part.core
    core_set = set(core)
    core_adj = {v: [w for w in G.adj[v] if w in core_set] for v in core}
    bridges = _bridges(core_adj, core)
    on_cycle = {v: any((min(v, w), max(v, w)) not in bridges for w in core_adj[v]) for v in core}
    nab = nabla_all(G)
    labels, bad = _cycle_labels(G, core, on_cycle, nab)
    if bad:
        return CanonicalResult(violation=bad, warnings=warnings)
    labels.update(_path_labels(G, core_set, on_cycle, labels))

    hanging: dict[int, list[int]] = {}
    for t in part.pendant_trees:
        hanging.setdefault(t.attach, []).extend(t.vertices)
    for r, verts in hanging.items():
        tree = subtree_adjacency(G.adj, [r, *verts])
        code, pos = rooted_tree_code(tree, r)
        for x in verts:
            labels[x] = (TREE, labels[r], code, pos[x])

    coded = []
    for comp in part.acyclic_components:
        code, pos = free_tree_code(subtree_adjacency(G.adj, comp))
        coded.append((code, comp, pos))
    coded.sort(key=lambda c: (c[0], c[1][0]))
    ordinal: dict[str, int] = {}
    for code, comp, pos in coded:
        k = ordinal[code] = ordinal.get(code, -1) + 1
        for x in comp:
            labels[x] = (COMPONENT, code, k, pos[x])

    order = sorted(range(n), key=lambda v: labels[v])
    for a, b in zip(order, order[1:]):
        if labels[a] == labels[b]:
            return CanonicalResult(violation=Violation(3, "two vertices share a label", [a, b]),
                                   warnings=warnings)
    rank = [0] * n
    for i, v in enumerate(order):
        rank[v] = i
    form = tuple(sorted((min(rank[u], rank[v]), max(rank[u], rank[v])) for u, v in G.edges()))
    return CanonicalResult([r + 1 for r in rank], form, None, warnings)


class IsoOutcome(Enum):
    ISOMORPHIC = 0
    NON_ISOMORPHIC = 1
    UNDECIDED = 2


def iso_test(G: Graph, H: Graph, strict: bool = False) -> IsoOutcome:
    a = canonical_label(G, strict)
    b = canonical_label(H, strict)
    if not (a.ok and b.ok):
        return IsoOutcome.UNDECIDED
    if G.n == H.n and a.form == b.form:
        return IsoOutcome.ISOMORPHIC
    return IsoOutcome.NON_ISOMORPHIC
