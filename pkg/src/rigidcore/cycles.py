"""Rooted oriented cycles, their order by nabla sequences, and (phi, psi) configurations."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Sequence

import numpy as np

from rigidcore.core import core_mask
from rigidcore.errors import DomainError, Undecided
from rigidcore.graph import Graph, induced_subgraph
from rigidcore.oracle import DEFAULT_BUDGET, constrained_isomorphism
from rigidcore.signatures import Cmp, TIE, nabla_all, nabla_core_all

RootedCycle = tuple[int, ...]


def log_bound(n: int) -> int:
    """``ceil(ln n)``, the length bound for 'short' cycles and small trees."""
    return math.ceil(math.log(n)) if n > 1 else 0


def is_rooted_cycle(G: Graph, cyc: Sequence[int]) -> bool:
    k = len(cyc)
    if k < 3 or len(set(cyc)) != k:
        return False
    return all(G.has_edge(cyc[i], cyc[(i + 1) % k]) for i in range(k))


def _bfs_limited(G: Graph, v: int, depth: int) -> dict[int, int]:
    dist = {v: 0}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        if dist[u] >= depth:
            continue
        for w in G.adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def shortest_cycle_length_through(G: Graph, v: int) -> int | None:
    """Length of a shortest cycle containing ``v``, or None."""
    if len(G.adj[v]) < 2:
        return None
    # BFS tree from v; each vertex remembers which neighbor of v it descends from.
    dist = {v: 0}
    branch = {v: -1}
    layer = [v]
    best = math.inf
    d = 0
    while layer and 2 * d + 1 < best:
        nxt = []
        for u in layer:
            for w in G.adj[u]:
                if w == v:
                    continue
                if w not in dist:
                    dist[w] = d + 1
                    branch[w] = w if u == v else branch[u]
                    nxt.append(w)
                elif u != v and branch[w] != branch[u]:
                    best = min(best, dist[u] + dist[w] + 1)
        layer = nxt
        d += 1
    return None if best == math.inf else int(best)


def _cycles_from(G: Graph, v: int, length: int) -> list[RootedCycle]:
    dist = _bfs_limited(G, v, length)
    out: list[RootedCycle] = []
    path = [v]
    on_path = {v}

    def extend(u: int) -> None:
        depth = len(path)
        for w in G.adj[u]:
            if depth == length:
                break
            if w == v:
                continue
            if w in on_path:
                continue
            # remaining steps after w: length - depth back to v
            if dist.get(w, math.inf) > length - depth:
                continue
            path.append(w)
            on_path.add(w)
            if depth + 1 == length:
                if G.has_edge(w, v):
                    out.append(tuple(path))
            else:
                extend(w)
            path.pop()
            on_path.discard(w)

    extend(v)
    return out


def enumerate_rooted_cycles(G: Graph, v: int, length: int,
                            max_len: int | None = None) -> list[RootedCycle]:
    """All rooted oriented cycles of exactly ``length`` starting at ``v``.

    ``length`` must lie in ``3..max_len``; ``max_len`` defaults to
    ``max(3, ceil(ln n))``.
    """
    if max_len is None:
        max_len = max(3, log_bound(G.n))
    if not 3 <= length <= max_len:
        raise DomainError(f"cycle length {length} outside 3..{max_len}")
    if not 0 <= v < G.n:
        raise DomainError(f"vertex {v} out of range")
    return _cycles_from(G, v, length)


def _compare_seqs(a: Sequence, b: Sequence) -> Cmp:
    if len(a) != len(b):
        return Cmp.LESS if len(a) < len(b) else Cmp.GREATER
    for x, y in zip(a, b):
        if x != y:
            return Cmp.LESS if x < y else Cmp.GREATER
    return TIE


def cycle_compare(G: Graph, X: Sequence[int], Y: Sequence[int],
                  nab: Sequence[tuple[int, ...]] | None = None) -> Cmp:
    """Shorter first, then the first differing nabla multiset decides; TIE otherwise."""
    if nab is None:
        nab = nabla_all(G)
    return _compare_seqs([nab[x] for x in X], [nab[y] for y in Y])


@dataclass
class MinCycle:
    cycle: RootedCycle | None
    signature: tuple | None
    tie: bool = False
    rival: RootedCycle | None = None


def min_cycle_label(G: Graph, v: int, nab: Sequence[tuple[int, ...]] | None = None) -> MinCycle:
    """The smallest shortest cycle rooted at ``v`` under the nabla order."""
    if nab is None:
        nab = nabla_all(G)
    k = shortest_cycle_length_through(G, v)
    if k is None:
        return MinCycle(None, None)
    best = None
    rival = None
    for cyc in _cycles_from(G, v, k):
        sig = tuple(nab[x] for x in cyc)
        if best is None or sig < best[1]:
            best = (cyc, sig)
            rival = None
        elif sig == best[1]:
            rival = cyc
    return MinCycle(best[0], best[1], rival is not None, rival)


class Kind(Enum):
    TYPE_I = "I"
    TYPE_II = "II"
    INVALID = "invalid"


@dataclass(frozen=True)
class Configuration:
    phi: tuple[int, ...]
    psi: tuple[int, ...]
    kind: Kind

    @property
    def k(self) -> int:
        return len(self.phi)


def _is_simple_path(G: Graph, seq: Sequence[int]) -> bool:
    return len(set(seq)) == len(seq) and all(G.has_edge(a, b) for a, b in zip(seq, seq[1:]))


def _is_closed_cycle(G: Graph, seq: Sequence[int]) -> bool:
    # (x1, ..., xk) with xk == x1 walking once around a simple cycle of length k-1
    return (len(seq) >= 4 and seq[0] == seq[-1]
            and len(set(seq[:-1])) == len(seq) - 1
            and all(G.has_edge(a, b) for a, b in zip(seq, seq[1:])))


def classify_configuration(G: Graph, phi: Sequence[int], psi: Sequence[int],
                           max_k: int | None = None) -> Kind:
    """Type I / type II / invalid.  ``max_k`` caps the order (None: no cap)."""
    k = len(phi)
    if k < 3 or len(psi) != k:
        raise DomainError("configuration needs two maps on the same [k], k >= 3")
    for x in (*phi, *psi):
        if not 0 <= x < G.n:
            raise DomainError(f"vertex {x} out of range")
    if max_k is not None and k > max_k:
        return Kind.INVALID
    confluences = [i for i in range(k) if phi[i] == psi[i]]
    if not confluences:
        if is_rooted_cycle(G, phi) and is_rooted_cycle(G, psi):
            return Kind.TYPE_I
        return Kind.INVALID
    if confluences == [0, k - 1]:
        if all(_is_simple_path(G, s) or _is_closed_cycle(G, s) for s in (phi, psi)):
            return Kind.TYPE_II
    return Kind.INVALID


def _core_pins(G: Graph, c: Configuration) -> tuple[Graph, list[tuple[int, int]]]:
    mask = core_mask(G)
    core = [u for u in range(G.n) if mask[u]]
    for x in (*c.phi, *c.psi):
        if not mask[x]:
            raise DomainError(f"vertex {x} is not in the 2-core")
    H, index = induced_subgraph(G, core)
    return H, [(index[a], index[b]) for a, b in zip(c.phi, c.psi)]


def is_compatible(G: Graph, c: Configuration, budget: int = DEFAULT_BUDGET) -> bool:
    """Is there an automorphism of the 2-core sending phi(i) to psi(i) for all i?

    Raises ``Undecided`` when the search budget runs out.
    """
    if c.kind is Kind.INVALID:
        raise DomainError("configuration is invalid")
    H, pins = _core_pins(G, c)
    return constrained_isomorphism(H, H, pins, budget) is not None


def is_acceptable(G: Graph, c: Configuration, budget: int = DEFAULT_BUDGET) -> bool:
    """Exists ``|U| = |W| = n-2`` holding the images and an isomorphism G_U -> G_W with phi -> psi."""
    if c.kind is Kind.INVALID:
        raise DomainError("configuration is invalid")
    im_phi, im_psi = set(c.phi), set(c.psi)
    if max(len(im_phi), len(im_psi)) > G.n - 2:
        raise DomainError("images do not fit in n-2 vertices")
    pairs = list(combinations(range(G.n), 2))
    for du in pairs:
        if im_phi & set(du):
            continue
        GU, iu = induced_subgraph(G, [x for x in range(G.n) if x not in du])
        for dw in pairs:
            if im_psi & set(dw):
                continue
            GW, iw = induced_subgraph(G, [x for x in range(G.n) if x not in dw])
            if GU.m != GW.m:
                continue
            pins = [(iu[a], iw[b]) for a, b in zip(c.phi, c.psi)]
            if constrained_isomorphism(GU, GW, pins, budget) is not None:
                return True
    return False


@dataclass
class CensusReport:
    mode: str
    sampled: int = 0
    type_i: int = 0
    type_ii: int = 0
    compatible: int = 0
    undecided: int = 0
    z_matched: int = 0

    def merge(self, other: "CensusReport") -> "CensusReport":
        mode = self.mode if self.mode == other.mode else "mixed"
        return CensusReport(mode, *(getattr(self, f) + getattr(other, f) for f in
                                    ("sampled", "type_i", "type_ii", "compatible", "undecided", "z_matched")))

    def to_json(self) -> dict:
        return dict(self.__dict__)


def _all_simple_sequences(G: Graph, k: int, allowed: Sequence[bool]) -> list[tuple[int, ...]]:
    """Simple k-vertex paths plus closed walks once around a (k-1)-cycle."""
    out = []
    path: list[int] = []

    def extend(u: int) -> None:
        if len(path) == k:
            out.append(tuple(path))
            return
        for w in G.adj[u]:
            if not allowed[w]:
                continue
            if w not in path or (len(path) == k - 1 and w == path[0] and k >= 4):
                path.append(w)
                extend(w)
                path.pop()

    for s in range(G.n):
        if allowed[s]:
            path.append(s)
            extend(s)
            path.pop()
    return out


EXHAUSTIVE_MAX_N = 16


def census_compatible(G: Graph, max_k: int, budget: int, seed: int,
                      exhaustive: bool | None = None,
                      oracle_budget: int = DEFAULT_BUDGET) -> CensusReport:
    """Count type I / II configurations of order ``3..max_k`` and how many are compatible.

    Small graphs are censused exhaustively.  Otherwise ``budget`` candidate pairs
    are sampled (see ``_sample_census``).  Only pairs whose core nabla
    signatures agree position by position can be compatible, so the oracle runs
    on those alone.
    """
    if exhaustive is None:
        exhaustive = G.n <= EXHAUSTIVE_MAX_N
    mask = core_mask(G)
    z = nabla_core_all(G)
    if exhaustive:
        return _exhaustive_census(G, max_k, mask, z, oracle_budget)
    return _sample_census(G, max_k, budget, seed, mask, z, oracle_budget)


def _check_pair(G, phi, psi, max_k, z, report, oracle_budget) -> None:
    kind = classify_configuration(G, phi, psi, max_k)
    if kind is Kind.INVALID:
        return
    if kind is Kind.TYPE_I:
        report.type_i += 1
    else:
        report.type_ii += 1
    if any(z[a] != z[b] for a, b in zip(phi, psi)):
        return
    report.z_matched += 1
    try:
        if is_compatible(G, Configuration(tuple(phi), tuple(psi), kind), oracle_budget):
            report.compatible += 1
    except Undecided:
        report.undecided += 1


def _exhaustive_census(G, max_k, mask, z, oracle_budget) -> CensusReport:
    report = CensusReport("exhaustive")
    for k in range(3, max_k + 1):
        cycles = [c for v in range(G.n) if mask[v] for c in _cycles_from(G, v, k)]
        for phi in cycles:
            for psi in cycles:
                report.sampled += 1
                _check_pair(G, phi, psi, max_k, z, report, oracle_budget)
        groups: dict[tuple[int, int], list] = {}
        for s in _all_simple_sequences(G, k, mask):
            groups.setdefault((s[0], s[-1]), []).append(s)
        for seqs in groups.values():
            for phi in seqs:
                for psi in seqs:
                    if phi is psi:
                        continue
                    report.sampled += 1
                    _check_pair(G, phi, psi, max_k, z, report, oracle_budget)
    return report


POOL_CAP = 200_000


def _sample_census(G, max_k, budget, seed, mask, z, oracle_budget) -> CensusReport:
    """Sampled census.

    Even-numbered samples target type I: phi and psi are rooted k-cycles drawn from
    the pool of all rooted k-cycles in the core (capped at ``POOL_CAP``); half of the
    time psi is drawn from the other cycles sharing phi's core-nabla sequence, the
    only ones that could be compatible (uniform over the pool if there are none).  Odd-numbered samples target type II: phi is a
    random self-avoiding walk of k core vertices and psi a random self-avoiding walk
    from phi(1) whose last step is forced onto phi(k) when possible.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    report = CensusReport("sampled")
    core = [u for u in range(G.n) if mask[u]]
    ks = list(range(3, max_k + 1))
    if not core or not ks:
        return report
    zid: dict = {}
    zcode = {u: zid.setdefault(z[u], len(zid)) for u in core}
    pools: dict[int, list] = {}
    buckets: dict[int, dict] = {}
    for k in ks:
        pool: list = []
        for v in core:
            pool.extend(_cycles_from(G, v, k))
            if len(pool) >= POOL_CAP:
                pool = pool[:POOL_CAP]
                break
        pools[k] = pool
        b: dict = {}
        for i, c in enumerate(pool):
            b.setdefault(tuple(zcode[x] for x in c), []).append(i)
        buckets[k] = b
    cycle_ks = [k for k in ks if pools[k]]
    adj = [[w for w in G.adj[u] if mask[w]] for u in range(G.n)]
    core_arr = np.array(core)
    draws = rng.random((budget, 8))
    for i in range(budget):
        r = draws[i]
        report.sampled += 1
        if i % 2 == 0:
            if not cycle_ks:
                continue
            k = cycle_ks[int(r[0] * len(cycle_ks))]
            pool = pools[k]
            j = int(r[1] * len(pool))
            phi = pool[j]
            same = buckets[k][tuple(zcode[x] for x in phi)] if r[2] < 0.5 else ()
            if len(same) > 1:
                # a uniform pick among the other cycles of the bucket
                t = int(r[3] * (len(same) - 1))
                psi = pool[same[t] if same[t] != j else same[-1]]
            else:
                psi = pool[int(r[3] * len(pool))]
            _check_pair(G, phi, psi, max_k, z, report, oracle_budget)
        else:
            k = ks[int(r[0] * len(ks))]
            phi = _random_walk(adj, int(core_arr[int(r[1] * len(core_arr))]), k, rng)
            if phi is None:
                continue
            psi = _random_walk(adj, phi[0], k, rng, end=phi[-1])
            if psi is None:
                continue
            _check_pair(G, phi, psi, max_k, z, report, oracle_budget)
    return report


def _random_walk(adj, start: int, k: int, rng, end: int | None = None):
    path = [start]
    seen = {start}
    while len(path) < k:
        u = path[-1]
        if end is not None and len(path) == k - 1:
            if end in adj[u] and (end not in seen or (end == path[0] and k >= 4)):
                path.append(end)
                break
            return None
        options = [w for w in adj[u] if w not in seen]
        if not options:
            return None
        w = options[int(rng.integers(len(options)))]
        path.append(w)
        seen.add(w)
    return tuple(path)
