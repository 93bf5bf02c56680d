"""Simple undirected graphs on dense integer ids, G(n,p) sampling and edge-list I/O.

Sampling is reproducible bit-for-bit: the generator is numpy's PCG64 seeded
with the 64-bit seed, and edges are located by geometric skipping over the
row-major enumeration of pairs ``(u, v)``, ``u < v``.  Gaps are drawn with
``Generator.geometric(p)`` (support 1, 2, ...), so edge ``j`` sits at linear
pair index ``sum(gaps[:j+1]) - 1``.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from rigidcore.errors import DomainError, ParseError

Edge = tuple[int, int]


class Graph:
    """Immutable simple undirected graph with vertices ``0..n-1``."""

    __slots__ = ("n", "adj", "_nbr_sets", "_m")

    def __init__(self, n: int, adj: Sequence[Sequence[int]]):
        self.n = n
        self.adj: tuple[tuple[int, ...], ...] = tuple(tuple(a) for a in adj)
        self._nbr_sets: tuple[frozenset[int], ...] | None = None
        self._m = sum(len(a) for a in self.adj) // 2

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "Graph":
        if n < 0:
            raise DomainError(f"negative vertex count {n}")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise DomainError(f"self-loop at {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, [sorted(s) for s in nbrs])

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, [() for _ in range(n)])

    @property
    def m(self) -> int:
        return self._m

    @property
    def nbr_sets(self) -> tuple[frozenset[int], ...]:
        if self._nbr_sets is None:
            self._nbr_sets = tuple(frozenset(a) for a in self.adj)
        return self._nbr_sets

    def degree(self, u: int) -> int:
        return len(self.adj[u])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def has_edge(self, u: int, v: int) -> bool:
        a = self.adj[u]
        i = bisect_left(a, v)
        return i < len(a) and a[i] == v

    def edges(self) -> list[Edge]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``u`` renamed ``perm[u]``."""
        return Graph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges()))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def _check_ids(G: Graph, U: Iterable[int]) -> list[int]:
    out = sorted(set(U))
    if out and (out[0] < 0 or out[-1] >= G.n):
        raise DomainError(f"vertex id out of range for n={G.n}")
    return out


def gnp_sample(n: int, p: float, seed: int) -> Graph:
    """Sample G(n, p) deterministically from ``seed``; expected time O(n + m)."""
    if n < 0:
        raise DomainError(f"negative vertex count {n}")
    if not (0.0 <= p <= 1.0):
        raise DomainError(f"edge probability {p} outside [0, 1]")
    total = n * (n - 1) // 2
    if total == 0 or p == 0.0:
        return Graph.empty(n)
    if p == 1.0:
        idx = np.arange(total, dtype=np.int64)
    else:
        rng = np.random.Generator(np.random.PCG64(int(seed) & 0xFFFFFFFFFFFFFFFF))
        chunk = int(total * p + 10 * math.sqrt(total * p) + 64)
        parts = []
        pos = -1
        while True:
            # for tiny p the draws saturate at the int64 maximum; clip so cumsum cannot overflow
            gaps = np.minimum(rng.geometric(p, size=chunk), total + 1).astype(np.int64)
            run = pos + np.cumsum(gaps)
            parts.append(run[run < total])
            pos = int(run[-1])
            if pos >= total:
                break
        idx = np.concatenate(parts)
    # row u starts at u*n - u*(u+1)/2 in the row-major pair order
    rows = np.arange(n, dtype=np.int64)
    starts = rows * n - rows * (rows + 1) // 2
    us = np.searchsorted(starts, idx, side="right") - 1
    vs = idx - starts[us] + us + 1
    nbrs: list[list[int]] = [[] for _ in range(n)]
    for u, v in zip(us.tolist(), vs.tolist()):
        nbrs[u].append(v)
        nbrs[v].append(u)
    for a in nbrs:
        a.sort()
    return Graph(n, nbrs)


def set_neighborhood(G: Graph, U: Iterable[int]) -> list[int]:
    """``N(U)``: neighbors of ``U`` outside ``U``."""
    U = set(_check_ids(G, U))
    out: set[int] = set()
    for u in U:
        out.update(G.adj[u])
    return sorted(out - U)


def closed_neighborhood(G: Graph, U: Iterable[int]) -> list[int]:
    """Union of ``{u} | N(u)`` over ``u`` in ``U``."""
    U = _check_ids(G, U)
    out = set(U)
    for u in U:
        out.update(G.adj[u])
    return sorted(out)


def cross_edge_count(G: Graph, U: Iterable[int], W: Iterable[int]) -> int:
    """Number of distinct edges with one end in ``U`` and the other in ``W``."""
    U = set(_check_ids(G, U))
    W = set(_check_ids(G, W))
    seen = set()
    for u in U:
        for v in G.adj[u]:
            if v in W:
                seen.add((u, v) if u < v else (v, u))
    return len(seen)


def sigma(G: Graph, U: Iterable[int]) -> list[int]:
    """Vertices outside ``U`` with exactly one neighbor in ``U``."""
    U = set(_check_ids(G, U))
    hits: dict[int, int] = {}
    for u in U:
        for v in G.adj[u]:
            if v not in U:
                hits[v] = hits.get(v, 0) + 1
    return sorted(v for v, c in hits.items() if c == 1)


def induced_subgraph(G: Graph, U: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """Subgraph induced by ``U`` relabelled to ``0..|U|-1`` in id order, plus the old->new map."""
    U = _check_ids(G, U)
    index = {u: i for i, u in enumerate(U)}
    adj = [[index[v] for v in G.adj[u] if v in index] for u in U]
    return Graph(len(U), adj), index


def remove_vertices(G: Graph, X: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    X = set(_check_ids(G, X))
    return induced_subgraph(G, (u for u in range(G.n) if u not in X))


def parse_edge_list(text: str) -> Graph:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("empty input", 1)
    head = lines[0].split()
    if len(head) != 2 or not all(t.isdigit() for t in head):
        raise ParseError(f"malformed header {lines[0]!r}", 1)
    n, m = int(head[0]), int(head[1])
    if len(lines) - 1 != m:
        raise ParseError(f"header declares {m} edges, found {len(lines) - 1}", 1)
    seen: set[Edge] = set()
    edges = []
    for lineno, line in enumerate(lines[1:], start=2):
        toks = line.split()
        if len(toks) != 2 or not all(t.isdigit() for t in toks):
            raise ParseError(f"malformed edge line {line!r}", lineno)
        u, v = int(toks[0]), int(toks[1])
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", lineno)
        if u >= n or v >= n:
            raise ParseError(f"vertex id >= n={n}", lineno)
        e = (u, v) if u < v else (v, u)
        if e in seen:
            raise ParseError(f"duplicate edge {e[0]} {e[1]}", lineno)
        seen.add(e)
        edges.append(e)
    return Graph.from_edges(n, edges)


def format_edge_list(G: Graph) -> str:
    lines = [f"{G.n} {G.m}"]
    lines.extend(f"{u} {v}" for u, v in G.edges())
    return "\n".join(lines) + "\n"


def read_edge_list(path: str | Path) -> Graph:
    return parse_edge_list(Path(path).read_text(encoding="ascii"))


def write_edge_list(G: Graph, path: str | Path) -> None:
    Path(path).write_bytes(format_edge_list(G).encode("ascii"))
