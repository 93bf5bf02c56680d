"""Degree-multiset vertex signatures and the relations used to compare them.

A multiset of integers is represented as a sorted tuple, so tuple order is
exactly the lexicographic order on ascending element sequences.
"""

from __future__ import annotations

from collections import Counter
from enum import IntEnum
from itertools import combinations
from typing import Iterable, Sequence

from rigidcore.core import two_core
from rigidcore.errors import DomainError
from rigidcore.graph import Graph, induced_subgraph

IntMultiset = tuple[int, ...]


class Cmp(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


# cycle comparison reports EQUAL as a tie: two distinct cycles that cannot be ordered
TIE = Cmp.EQUAL


def multiset(items: Iterable[int]) -> IntMultiset:
    return tuple(sorted(items))


def nabla(G: Graph, u: int) -> IntMultiset:
    """For each neighbor ``v`` of ``u``: how many neighbors ``v`` has outside ``{u} | N(u)``."""
    if not 0 <= u < G.n:
        raise DomainError(f"vertex {u} out of range")
    closed = G.nbr_sets[u] | {u}
    return tuple(sorted(sum(1 for w in G.adj[v] if w not in closed) for v in G.adj[u]))


def nabla_all(G: Graph) -> list[IntMultiset]:
    sets = G.nbr_sets
    out = []
    for u in range(G.n):
        closed = sets[u]
        vals = []
        for v in G.adj[u]:
            # neighbors of v outside N(u) | {u}; v itself is never adjacent to v
            c = 0
            for w in G.adj[v]:
                if w != u and w not in closed:
                    c += 1
            vals.append(c)
        vals.sort()
        out.append(tuple(vals))
    return out


def nabla_core(G: Graph, u: int) -> IntMultiset:
    """``nabla`` evaluated inside the subgraph induced by the 2-core."""
    core = two_core(G)
    H, index = induced_subgraph(G, core)
    if u not in index:
        raise DomainError(f"vertex {u} is not in the 2-core")
    return nabla(H, index[u])


def nabla_core_all(G: Graph) -> dict[int, IntMultiset]:
    core = two_core(G)
    H, index = induced_subgraph(G, core)
    z = nabla_all(H)
    return {u: z[i] for u, i in index.items()}


def multiset_lex_compare(A: Sequence[int], B: Sequence[int]) -> Cmp:
    a, b = tuple(sorted(A)), tuple(sorted(B))
    if a < b:
        return Cmp.LESS
    if a > b:
        return Cmp.GREATER
    return Cmp.EQUAL


DECREMENT_BUDGET = 4
MAX_STEP = 2
MAX_DELETIONS = 2


def _sub_multisets(c: Counter, k: int) -> set[IntMultiset]:
    """All results of deleting exactly ``k`` elements from the multiset ``c``."""
    elems = sorted(c.elements())
    return {tuple(x for i, x in enumerate(elems) if i not in drop)
            for drop in combinations(range(len(elems)), k)}


def _matchable(a: IntMultiset, b: IntMultiset) -> bool:
    # Sorted pairing minimizes the total absolute gap and the largest gap at once, and
    # the surplus on each side is (total gap +/- (sum a - sum b)) / 2, so it is optimal
    # for both budgets simultaneously.
    down_a = down_b = 0
    for x, y in zip(a, b):
        d = x - y
        if d > MAX_STEP or -d > MAX_STEP:
            return False
        if d > 0:
            down_a += d
        else:
            down_b -= d
    return down_a <= DECREMENT_BUDGET and down_b <= DECREMENT_BUDGET


def approx_equal(A: Sequence[int], B: Sequence[int]) -> bool:
    """The relation absorbing the removal of two vertices from a K_{3,2}-free graph.

    Each side independently may delete at most two elements and lower elements by
    1 or 2 with a total decrease of at most 4; the two sides must end up equal.
    """
    ca, cb = Counter(A), Counter(B)
    la, lb = len(A), len(B)
    for da in range(MAX_DELETIONS + 1):
        db = lb - la + da
        if not 0 <= db <= MAX_DELETIONS or da > la:
            continue
        subs_b = _sub_multisets(cb, db)
        for a in _sub_multisets(ca, da):
            if any(_matchable(a, b) for b in subs_b):
                return True
    return False
