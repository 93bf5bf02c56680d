"""Decks of vertex-deleted subgraphs and reconstruction of a graph from its deck."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from pathlib import Path

from rigidcore.canonical import canonical_label
from rigidcore.core import two_core
from rigidcore.errors import DomainError, Undecided
from rigidcore.graph import Graph, induced_subgraph, read_edge_list, remove_vertices, write_edge_list
from rigidcore.oracle import (DEFAULT_BUDGET, canonical_form, canonical_key,
                              constrained_isomorphism, refinement_invariant)


@dataclass(frozen=True)
class Card:
    n: int
    edges: tuple[tuple[int, int], ...]
    method: str = field(default="canonical", compare=False)

    @property
    def key(self) -> tuple:
        return self.n, self.edges

    def graph(self) -> Graph:
        return Graph.from_edges(self.n, self.edges)


@dataclass
class Deck:
    cards: list[Card]

    def __post_init__(self):
        self.cards = sorted(self.cards, key=lambda c: c.key)

    def __len__(self) -> int:
        return len(self.cards)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Deck) and [c.key for c in self.cards] == [c.key for c in other.cards]

    def counter(self) -> Counter:
        return Counter(c.key for c in self.cards)


def card_of(H: Graph, budget: int = DEFAULT_BUDGET) -> Card:
    """Canonical form of one card: the fast labelling first, the exact search as fallback.

    Both canonicalizers succeed or fail on whole isomorphism classes, so isomorphic
    cards always come out with the same form.
    """
    res = canonical_label(H)
    if res.ok:
        return Card(H.n, res.form, "canonical")
    try:
        _, form = canonical_form(H, budget)
    except Undecided as exc:
        raise Undecided(f"no canonical form for a {H.n}-vertex card: {exc}") from exc
    return Card(H.n, form, "oracle")


def deck(G: Graph, budget: int = DEFAULT_BUDGET) -> Deck:
    if G.n < 2:
        raise DomainError("a deck needs at least two vertices")
    return Deck([card_of(remove_vertices(G, [u])[0], budget) for u in range(G.n)])


def is_k32_free(G: Graph) -> bool:
    """No two vertices share three neighbors."""
    common: Counter = Counter()
    for w in range(G.n):
        for pair in combinations(G.adj[w], 2):
            common[pair] += 1
            if common[pair] >= 3:
                return False
    return True


class InconsistentDeck(ValueError):
    pass


def _edge_count(cards: list[Card]) -> tuple[int, list[int]]:
    n = len(cards)
    if n < 3:
        raise InconsistentDeck("need at least three cards")
    if any(c.n != n - 1 for c in cards):
        raise InconsistentDeck("every card must have n-1 vertices")
    total = sum(len(c.edges) for c in cards)
    if total % (n - 2):
        raise InconsistentDeck(f"edge total {total} not divisible by n-2={n - 2}")
    m = total // (n - 2)
    degs = [m - len(c.edges) for c in cards]
    if any(not 0 <= d <= n - 1 for d in degs):
        raise InconsistentDeck("implied degrees out of range")
    return m, degs


def degree_sequence_from_deck(d: Deck) -> list[int]:
    """Sorted degree sequence: |E| = sum of card sizes / (n-2); a card misses its vertex's degree."""
    return sorted(_edge_count(d.cards)[1])


@dataclass
class ReconstructionResult:
    graph: Graph | None
    step: str | None = None         # failed step on failure
    message: str = ""
    pair: tuple[int, int] | None = None

    @property
    def ok(self) -> bool:
        return self.graph is not None


def _core_degrees(H: Graph) -> tuple[list[int], list[int]]:
    core = two_core(H)
    sub, _ = induced_subgraph(H, core)
    return core, sub.degrees()


def _overlays(Cu: Graph, Cv: Graph, du: int, dv: int, m: int, cap: int,
              budget: int) -> list[Graph]:
    """Glue card u back onto card v through isomorphisms of the doubly-deleted graphs.

    ``Cu`` misses u, ``Cv`` misses v.  For every v' in Cu and u' in Cv such that
    Cu - v' ~ Cv - u', adding u to Cu with the neighbors u' has in Cv (pulled back
    through the isomorphism) gives G up to the single bit uv, fixed by |E|.
    """
    n1 = Cu.n
    out = []
    for b in (0, 1):
        side_u = [x for x in range(n1) if Cu.degree(x) == dv - b]
        side_v = [y for y in range(n1) if Cv.degree(y) == du - b]
        if not side_u or not side_v:
            continue
        if Cu.m + du != m:
            continue
        hv = {}
        for y in side_v:
            H2, i2 = remove_vertices(Cv, [y])
            hv[y] = (H2, i2, refinement_invariant(H2))
        for x in side_u:
            H1, i1 = remove_vertices(Cu, [x])
            inv1 = refinement_invariant(H1)
            back = {new: old for old, new in i1.items()}
            for y, (H2, i2, inv2) in hv.items():
                if inv1 != inv2:
                    continue
                pi = constrained_isomorphism(H1, H2, (), budget)
                if pi is None:
                    continue
                pinv = [0] * len(pi)
                for a, c in enumerate(pi):
                    pinv[c] = a
                nbrs = [back[pinv[i2[w]]] for w in Cv.adj[y]]
                if b:
                    nbrs.append(x)
                edges = Cu.edges() + [(w, n1) for w in nbrs]
                out.append(Graph.from_edges(n1 + 1, edges))
                if len(out) > cap:
                    return out
    return out


def reconstruct_from_deck(d: Deck, max_pairs: int = 25, overlay_cap: int = 8,
                          budget: int = DEFAULT_BUDGET) -> ReconstructionResult:
    """Rebuild a graph from its deck following the interior-pair argument.

    Steps: (i) |E| and degrees, (ii) |R(G)| and which cards delete a core vertex,
    (iii) the set A of core vertices all of whose neighbors have core degree >= 4,
    (iv) overlay two cards of an interior pair through the isomorphism of the
    doubly-deleted graphs, (v) the remaining bit from |E|.  The result is returned
    only if its own deck equals ``d``.
    """
    cards = d.cards
    try:
        m, degs = _edge_count(cards)
    except InconsistentDeck as exc:
        return ReconstructionResult(None, "i", str(exc))
    n = len(cards)
    graphs = [c.graph() for c in cards]
    core_info = [_core_degrees(H) for H in graphs]

    # (ii)
    if min(degs) >= 2:
        rsize = n
        core_degs = sorted(degs)
    else:
        low = [u for u in range(n) if degs[u] <= 1]
        sizes = {len(core_info[u][0]) for u in low}
        if len(sizes) != 1:
            return ReconstructionResult(None, "ii", "low-degree cards disagree on the core size")
        rsize = sizes.pop()
        core_degs = sorted(core_info[low[0]][1])
    in_core = [rsize == n or len(core_info[u][0]) < rsize for u in range(n)]
    if sum(in_core) != rsize:
        return ReconstructionResult(None, "ii", "core membership count disagrees with |R(G)|")

    # (iii)
    total_core_deg = sum(core_degs)
    stable, in_a = [], []
    for u in range(n):
        if not in_core[u] or len(core_info[u][0]) != rsize - 1:
            continue
        stable.append(u)
        twice = total_core_deg - sum(core_info[u][1])
        if twice % 2 or twice // 2 != degs[u]:
            continue            # u has neighbors off the core (or the deck is inconsistent)
        rest = list(core_degs)
        if degs[u] not in rest:
            continue
        rest.remove(degs[u])
        if sum(1 for x in core_info[u][1] if x <= 2) == sum(1 for x in rest if x <= 2):
            in_a.append(u)

    pool = in_a if len(in_a) >= 2 else stable
    pairs = sorted(combinations(pool, 2), key=lambda p: (degs[p[0]] + degs[p[1]], p))
    if not pairs:
        return ReconstructionResult(None, "iv", "no candidate interior pair")
    target = d.counter()
    degree_seq = sorted(degs)
    for u, v in pairs[:max_pairs]:
        found: dict[tuple, Graph] = {}
        overlays = _overlays(graphs[u], graphs[v], degs[u], degs[v], m, overlay_cap, budget)
        if len(overlays) > overlay_cap:
            continue
        for G in overlays:
            # (v) the uv bit is already forced by the edge count inside _overlays
            if G.m != m or sorted(G.degrees()) != degree_seq:
                continue
            key = canonical_key(G, budget)
            if key in found:
                continue
            if deck(G, budget).counter() == target:
                found[key] = G
        if len(found) == 1:
            return ReconstructionResult(next(iter(found.values())), None, "", (u, v))
        if len(found) > 1:
            return ReconstructionResult(None, "iv", "non-isomorphic overlays share the deck", (u, v))
    return ReconstructionResult(None, "iv", f"no consistent overlay among {min(len(pairs), max_pairs)} pairs")


@lru_cache(maxsize=None)
def graph_classes(n: int) -> tuple[Graph, ...]:
    """One representative per isomorphism class of n-vertex graphs (n <= 8)."""
    if n == 0:
        return (Graph.empty(0),)
    reps: dict[tuple, Graph] = {}
    for H in graph_classes(n - 1):
        base = H.edges()
        for mask in range(1 << (n - 1)):
            edges = base + [(i, n - 1) for i in range(n - 1) if mask >> i & 1]
            G = Graph.from_edges(n, edges)
            reps.setdefault(canonical_key(G), G)
    return tuple(reps[k] for k in sorted(reps))


@lru_cache(maxsize=None)
def _class_decks(n: int) -> tuple:
    return tuple((G, sorted(G.degrees()), deck(G).counter()) for G in graph_classes(n))


def deck_determines(G: Graph, max_n: int = 8) -> bool:
    """Brute force: exactly one isomorphism class of n-vertex graphs has G's deck."""
    if G.n > max_n:
        raise Undecided(f"exhaustive deck check limited to n <= {max_n}")
    target = deck(G).counter()
    degs = sorted(G.degrees())
    hits = sum(1 for _, dg, c in _class_decks(G.n) if dg == degs and c == target)
    return hits == 1


def reconstruct_exhaustive(d: Deck, max_n: int = 8) -> ReconstructionResult:
    """Small-n fallback: the unique isomorphism class of n-vertex graphs with deck ``d``."""
    n = len(d)
    if n > max_n:
        raise Undecided(f"exhaustive reconstruction limited to n <= {max_n}")
    target = d.counter()
    hits = [G for G, _, c in _class_decks(n) if c == target]
    if len(hits) == 1:
        return ReconstructionResult(hits[0])
    if not hits:
        return ReconstructionResult(None, "exhaustive", "no graph has this deck")
    return ReconstructionResult(None, "exhaustive", f"{len(hits)} non-isomorphic graphs share this deck")


def write_deck(d: Deck, out_dir: str | Path) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = {"n": len(d), "cards": []}
    for i, c in enumerate(d.cards):
        name = f"card_{i:04d}.txt"
        write_edge_list(c.graph(), out / name)
        manifest["cards"].append({"file": name, "method": c.method,
                                  "vertices": c.n, "edges": len(c.edges)})
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def read_deck(in_dir: str | Path) -> Deck:
    src = Path(in_dir)
    manifest = json.loads((src / "manifest.json").read_text())
    cards = []
    for entry in manifest["cards"]:
        H = read_edge_list(src / entry["file"])
        cards.append(Card(H.n, tuple(H.edges()), entry.get("method", "canonical")))
    return Deck(cards)
