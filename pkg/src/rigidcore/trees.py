"""AHU-style canonical codes for rooted and free trees.

The code of a rooted tree is ``"(" + sorted child codes + ")"``; two rooted trees
get the same code exactly when they are isomorphic.  Positions number the vertices
in preorder of the canonically ordered tree (children by code, ties by id), so
corresponding vertices of isomorphic trees get the same position and siblings
with equal subtrees still get distinct ones.
"""

from __future__ import annotations

from collections import deque
from typing import Mapping, Sequence

from rigidcore.errors import DomainError

Adjacency = Mapping[int, Sequence[int]]


def _check_tree(adj: Adjacency) -> None:
    verts = list(adj)
    if not verts:
        raise DomainError("empty tree")
    edges = sum(len(adj[v]) for v in verts)
    if edges != 2 * (len(verts) - 1):
        raise DomainError("not a tree: wrong edge count")
    seen = {verts[0]}
    queue = deque([verts[0]])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in adj:
                raise DomainError(f"neighbor {w} outside the tree")
            if w not in seen:
                seen.add(w)
                queue.append(w)
    if len(seen) != len(verts):
        raise DomainError("not a tree: disconnected")


def _rooted(adj: Adjacency, root: int) -> tuple[str, dict[int, int]]:
    parent = {root: None}
    order = [root]
    for u in order:
        for w in adj[u]:
            if w not in parent:
                parent[w] = u
                order.append(w)
    code: dict[int, str] = {}
    kids: dict[int, list[int]] = {}
    for u in reversed(order):
        ch = [w for w in adj[u] if w != parent[u]]
        ch.sort(key=lambda w: (code[w], w))
        kids[u] = ch
        code[u] = "(" + "".join(code[w] for w in ch) + ")"
    pos: dict[int, int] = {}
    stack = [root]
    while stack:
        u = stack.pop()
        pos[u] = len(pos)
        stack.extend(reversed(kids[u]))
    return code[root], pos


def rooted_tree_code(adj: Adjacency, root: int) -> tuple[str, dict[int, int]]:
    """Canonical code of the tree rooted at ``root`` and each vertex's position."""
    _check_tree(adj)
    if root not in adj:
        raise DomainError(f"root {root} not in tree")
    return _rooted(adj, root)


def tree_centers(adj: Adjacency) -> list[int]:
    deg = {v: len(adj[v]) for v in adj}
    layer = [v for v, d in deg.items() if d <= 1]
    remaining = len(deg)
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for u in layer:
            for w in adj[u]:
                deg[w] -= 1
                if deg[w] == 1:
                    nxt.append(w)
        layer = nxt
    return sorted(layer)


def free_tree_code(adj: Adjacency) -> tuple[str, dict[int, int]]:
    """Canonical code of an unrooted tree: the rooted code at the code-minimal center."""
    _check_tree(adj)
    best = None
    for c in tree_centers(adj):
        code, pos = _rooted(adj, c)
        if best is None or code < best[0]:
            best = (code, pos)
    return best


def subtree_adjacency(adj: Sequence[Sequence[int]], vertices: Sequence[int]) -> dict[int, list[int]]:
    keep = set(vertices)
    return {v: [w for w in adj[v] if w in keep] for v in vertices}
