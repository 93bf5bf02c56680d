"""2-core extraction and the decomposition of everything that hangs off it."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from rigidcore.errors import DomainError
from rigidcore.graph import Graph


def _peel(G: Graph, alive: list[bool]) -> list[bool]:
    """Iteratively drop live vertices of live-degree <= 1. Mutates and returns ``alive``."""
    deg = [0] * G.n
    for u in range(G.n):
        if alive[u]:
            deg[u] = sum(1 for v in G.adj[u] if alive[v])
    queue = deque(u for u in range(G.n) if alive[u] and deg[u] <= 1)
    while queue:
        u = queue.popleft()
        if not alive[u]:
            continue
        alive[u] = False
        for v in G.adj[u]:
            if alive[v]:
                deg[v] -= 1
                if deg[v] == 1:
                    queue.append(v)
    return alive


def two_core(G: Graph) -> list[int]:
    """Vertex set R(G) of the 2-core, sorted."""
    alive = _peel(G, [True] * G.n)
    return [u for u in range(G.n) if alive[u]]


def core_mask(G: Graph) -> list[bool]:
    return _peel(G, [True] * G.n)


@dataclass(frozen=True)
class PendantTree:
    attach: int                 # core vertex the tree hangs from
    root: int                   # tree vertex adjacent to ``attach``
    vertices: tuple[int, ...]


@dataclass
class CorePartition:
    core: list[int]
    pendant_trees: list[PendantTree] = field(default_factory=list)
    acyclic_components: list[list[int]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "core": self.core,
            "pendant_trees": [
                {"attach": t.attach, "root": t.root, "vertices": list(t.vertices)}
                for t in self.pendant_trees
            ],
            "acyclic_components": self.acyclic_components,
        }


def core_partition(G: Graph) -> CorePartition:
    in_core = core_mask(G)
    seen = list(in_core)
    trees: list[PendantTree] = []
    comps: list[list[int]] = []
    for s in range(G.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        attach = []
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in G.adj[u]:
                if in_core[v]:
                    attach.append((v, u))
                elif not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    queue.append(v)
        comp.sort()
        if not attach:
            comps.append(comp)
        else:
            # a peeled piece touching the core does so through exactly one edge
            assert len(attach) == 1, attach
            trees.append(PendantTree(attach[0][0], attach[0][1], tuple(comp)))
    trees.sort(key=lambda t: (t.attach, t.root))
    return CorePartition([u for u in range(G.n) if in_core[u]], trees, comps)


def _bfs_dist(G: Graph, sources: Iterable[int], limit: float = math.inf,
              alive: list[bool] | None = None) -> list[float]:
    dist = [math.inf] * G.n
    queue = deque()
    for s in sources:
        dist[s] = 0
        queue.append(s)
    while queue:
        u = queue.popleft()
        if dist[u] >= limit:
            continue
        for v in G.adj[u]:
            if dist[v] == math.inf and (alive is None or alive[v]):
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def peripheral_vertices(G: Graph, T: Iterable[int]) -> list[int]:
    """Vertices of ``T`` (a subset of the core) within distance 2 of the non-core part."""
    in_core = core_mask(G)
    T = sorted(set(T))
    for t in T:
        if not (0 <= t < G.n) or not in_core[t]:
            raise DomainError(f"vertex {t} is not in the 2-core")
    outside = [u for u in range(G.n) if not in_core[u]]
    if not outside:
        return []
    dist = _bfs_dist(G, outside, limit=2)
    return [t for t in T if dist[t] <= 2]


def is_interior_pair(G: Graph, u: int, v: int) -> bool:
    """True iff deleting ``u`` and ``v`` commutes with taking the 2-core."""
    if u == v:
        raise DomainError("interior pair needs two distinct vertices")
    in_core = core_mask(G)
    for x in (u, v):
        if not (0 <= x < G.n) or not in_core[x]:
            raise DomainError(f"vertex {x} is not in the 2-core")
    alive = [True] * G.n
    alive[u] = alive[v] = False
    after = _peel(G, alive)
    return all(after[x] == (in_core[x] and x != u and x != v) for x in range(G.n))


def is_connected(G: Graph) -> bool:
    if G.n <= 1:
        return True
    return all(d < math.inf for d in _bfs_dist(G, [0]))


def eccentricity(G: Graph, s: int) -> float:
    return max(_bfs_dist(G, [s]))


def diameter(G: Graph) -> float:
    """Largest BFS eccentricity; ``math.inf`` when disconnected (0 for n <= 1)."""
    if G.n <= 1:
        return 0
    if not is_connected(G):
        return math.inf
    return max(eccentricity(G, s) for s in range(G.n))


def diameter_below(G: Graph, bound: float) -> tuple[bool, float]:
    """Check ``diam(G) < bound`` with early exit; returns (holds, witness eccentricity)."""
    if G.n <= 1:
        return 0 < bound, 0
    if not is_connected(G):
        return False, math.inf
    worst = 0
    for s in range(G.n):
        e = eccentricity(G, s)
        worst = max(worst, e)
        if worst >= bound:
            return False, worst
    return True, worst
