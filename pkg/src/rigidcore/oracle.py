"""Exact automorphism / isomorphism computation by colour refinement and backtracking.

Every colouring here is *canonical*: colours are ranks of isomorphism-invariant
signatures, so the same structure gets the same colour numbers no matter how
the vertices are named.  That is what lets two graphs be refined separately or
jointly and still be compared colour for colour.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from rigidcore.core import two_core
from rigidcore.errors import Undecided
from rigidcore.graph import Graph, induced_subgraph
from rigidcore.signatures import nabla_all

DEFAULT_BUDGET = 200_000


def _rank(sigs: Sequence) -> list[int]:
    order = {s: i for i, s in enumerate(sorted(set(sigs)))}
    return [order[s] for s in sigs]


def refine(adj: Sequence[Sequence[int]], colors: Sequence[int]) -> list[int]:
    """Coarsest equitable refinement of ``colors`` (which must be ranks 0..c-1)."""
    colors = list(colors)
    count = len(set(colors))
    n = len(colors)
    while True:
        sigs = [(colors[v], tuple(sorted([colors[w] for w in adj[v]]))) for v in range(n)]
        new = _rank(sigs)
        new_count = len(set(new)) if n else 0
        if new_count == count:
            return new
        colors, count = new, new_count


def initial_colors(G: Graph, marks: Sequence = ()) -> list:
    """Isomorphism-invariant seed: (mark, degree, nabla) per vertex."""
    nab = nabla_all(G)
    marks = list(marks) or [0] * G.n
    return [(marks[v], len(G.adj[v]), nab[v]) for v in range(G.n)]


def equitable_colors(G: Graph) -> list[int]:
    return refine(G.adj, _rank(initial_colors(G)))


def _individualize(adj, colors: list[int], vertices: Sequence[int]) -> list[int]:
    chosen = set(vertices)
    return refine(adj, _rank([(c, v in chosen) for v, c in enumerate(colors)]))


def _cells(colors: Sequence[int]) -> dict[int, list[int]]:
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    return cells


def _target_cell(cells: dict[int, list[int]], size_of) -> int | None:
    """First smallest non-singleton cell, by colour id."""
    best = None
    for c in sorted(cells):
        s = size_of(cells[c])
        if s > 1 and (best is None or s < best[0]):
            best = (s, c)
    return None if best is None else best[1]


def is_automorphism(G: Graph, perm: Sequence[int]) -> bool:
    if sorted(perm) != list(range(G.n)):
        return False
    sets = G.nbr_sets
    return all(perm[v] in sets[perm[u]] for u in range(G.n) for v in G.adj[u])


def is_isomorphism(G: Graph, H: Graph, perm: Sequence[int]) -> bool:
    if G.n != H.n or G.m != H.m or sorted(perm) != list(range(H.n)):
        return False
    sets = H.nbr_sets
    return all(perm[v] in sets[perm[u]] for u in range(G.n) for v in G.adj[u])


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def tick(self) -> None:
        self.used += 1
        if self.used > self.limit:
            raise Undecided(f"search budget of {self.limit} nodes exhausted")


def constrained_isomorphism(G: Graph, H: Graph, pins: Sequence[tuple[int, int]] = (),
                            budget: int = DEFAULT_BUDGET) -> list[int] | None:
    """An isomorphism ``G -> H`` sending each pinned ``g`` to its ``h``, or None."""
    if G.n != H.n or G.m != H.m:
        return None
    n = G.n
    if n == 0:
        return []
    gmap: dict[int, int] = {}
    hmap: dict[int, int] = {}
    for g, h in pins:
        if gmap.get(g, h) != h or hmap.get(h, g) != g:
            return None
        gmap[g], hmap[h] = h, g
    # pinned pair i gets mark i+1 on both sides
    order = sorted(gmap)
    gmarks = [0] * n
    hmarks = [0] * n
    for i, g in enumerate(order, start=1):
        gmarks[g] = i
        hmarks[gmap[g]] = i
    adj = [list(a) for a in G.adj] + [[w + n for w in a] for a in H.adj]
    seed = initial_colors(G, gmarks) + initial_colors(H, hmarks)
    colors = refine(adj, _rank(seed))
    tracker = _Budget(budget)

    def search(colors: list[int]) -> list[int] | None:
        tracker.tick()
        gc: dict[int, list[int]] = {}
        hc: dict[int, list[int]] = {}
        for v in range(n):
            gc.setdefault(colors[v], []).append(v)
            hc.setdefault(colors[v + n], []).append(v + n)
        if gc.keys() != hc.keys() or any(len(gc[c]) != len(hc[c]) for c in gc):
            return None
        target = _target_cell(gc, len)
        if target is None:
            perm = [0] * n
            for c, (g,) in gc.items():
                perm[g] = hc[c][0] - n
            return perm if is_isomorphism(G, H, perm) else None
        g = gc[target][0]
        for h in hc[target]:
            found = search(_individualize(adj, colors, (g, h)))
            if found is not None:
                return found
        return None

    return search(colors)


def find_isomorphism(G: Graph, H: Graph, budget: int = DEFAULT_BUDGET) -> list[int] | None:
    return constrained_isomorphism(G, H, (), budget)


def are_isomorphic(G: Graph, H: Graph, budget: int = DEFAULT_BUDGET) -> bool:
    return find_isomorphism(G, H, budget) is not None


@dataclass
class AutGroup:
    generators: list[list[int]] = field(default_factory=list)
    order: int = 1

    def to_json(self) -> dict:
        return {"generators": len(self.generators), "order": str(self.order)}


def _orbit(start: int, gens: Sequence[Sequence[int]]) -> set[int]:
    orbit = {start}
    frontier = [start]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = g[x]
            if y not in orbit:
                orbit.add(y)
                frontier.append(y)
    return orbit


def automorphism_group(G: Graph, budget: int = DEFAULT_BUDGET) -> AutGroup:
    """Generators and exact order via a stabilizer chain along one refinement path.

    At each level the orbit of the chosen vertex under the pointwise stabilizer of
    the already-fixed prefix is found by explicit pinned searches (skipping images
    already reachable through known generators); the order is the product of those
    orbit sizes.
    """
    colors = equitable_colors(G)
    gens: list[list[int]] = []
    order = 1
    prefix: list[int] = []
    while True:
        cells = _cells(colors)
        target = _target_cell(cells, len)
        if target is None:
            return AutGroup(gens, order)
        cell = cells[target]
        v = cell[0]
        fixing = [g for g in gens if all(g[x] == x for x in prefix)]
        orbit = _orbit(v, fixing)
        for w in cell[1:]:
            if w in orbit:
                continue
            pins = [(x, x) for x in prefix] + [(v, w)]
            perm = constrained_isomorphism(G, G, pins, budget)
            if perm is not None:
                gens.append(perm)
                fixing.append(perm)
                orbit = _orbit(v, fixing)
        order *= len(orbit)
        prefix.append(v)
        colors = _individualize(G.adj, colors, (v,))


def is_rigid(G: Graph, budget: int = DEFAULT_BUDGET) -> bool:
    colors = equitable_colors(G)
    if len(set(colors)) == G.n:
        return True
    return automorphism_group(G, budget).order == 1


def core_aut_trivial(G: Graph, budget: int = DEFAULT_BUDGET) -> bool:
    H, _ = induced_subgraph(G, two_core(G))
    return is_rigid(H, budget)


def _form(G: Graph, colors: Sequence[int]) -> tuple[tuple[int, int], ...]:
    return tuple(sorted((min(colors[u], colors[v]), max(colors[u], colors[v]))
                        for u, v in G.edges()))


def canonical_form(G: Graph, budget: int = DEFAULT_BUDGET) -> tuple[list[int], tuple]:
    """Canonical labelling by individualization-refinement.

    Returns ``(labels, form)``: ``labels[v]`` is ``v``'s canonical id in ``0..n-1`` and
    ``form`` the sorted relabelled edge tuple, the minimum over all leaves of the
    search tree.  Subtrees are pruned with automorphisms discovered on the way.
    """
    n = G.n
    if n == 0:
        return [], ()
    adj = G.adj
    tracker = _Budget(budget)
    best: dict = {}
    autos: list[list[int]] = []

    def leaf(colors: list[int], path: list[int]) -> int | None:
        form = _form(G, colors)
        for key in ("first", "best"):
            if key in best and best[key][0] == form:
                other = best[key][1]
                # colors and other both map vertices to canonical ids
                inv = [0] * n
                for v, c in enumerate(other):
                    inv[c] = v
                gamma = [inv[colors[v]] for v in range(n)]
                if gamma != list(range(n)):
                    autos.append(gamma)
                common = 0
                for a, b in zip(path, best[key][2]):
                    if a != b:
                        break
                    common += 1
                return common
        if "first" not in best:
            best["first"] = (form, colors, list(path))
        if "best" not in best or form < best["best"][0]:
            best["best"] = (form, colors, list(path))
        return None

    def search(colors: list[int], path: list[int]) -> int | None:
        tracker.tick()
        cells = _cells(colors)
        target = _target_cell(cells, len)
        if target is None:
            return leaf(colors, path)
        level = len(path)
        explored: list[int] = []
        for w in cells[target]:
            fixing = [g for g in autos if all(g[x] == x for x in path)]
            if explored and any(w in _orbit(e, fixing) for e in explored):
                continue
            explored.append(w)
            path.append(w)
            jump = search(_individualize(adj, colors, (w,)), path)
            path.pop()
            if jump is not None and jump < level:
                return jump
        return None

    search(equitable_colors(G), [])
    colors = best["best"][1]
    return list(colors), best["best"][0]


def canonical_key(G: Graph, budget: int = DEFAULT_BUDGET) -> tuple[int, tuple]:
    """Hashable isomorphism-class key: equal iff the graphs are isomorphic."""
    return G.n, canonical_form(G, budget)[1]


def brute_force_automorphisms(G: Graph) -> list[tuple[int, ...]]:
    """All automorphisms by trying every permutation. Only for tiny graphs."""
    from itertools import permutations

    return [p for p in permutations(range(G.n)) if is_automorphism(G, p)]


def refinement_invariant(G: Graph) -> tuple:
    """Cheap isomorphism invariant: sizes and order of the canonical refinement colours."""
    return G.n, G.m, tuple(sorted(equitable_colors(G)))
