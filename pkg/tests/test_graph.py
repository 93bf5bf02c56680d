from __future__ import annotations

import math

import pytest
from conftest import complete, cycle, path, star

from rigidcore.errors import DomainError, ParseError
from rigidcore.graph import (Graph, closed_neighborhood, cross_edge_count, format_edge_list,
                             gnp_sample, induced_subgraph, parse_edge_list, read_edge_list,
                             remove_vertices, set_neighborhood, sigma, write_edge_list)


def test_gnp_extremes():
    assert gnp_sample(5, 0.0, 7).m == 0
    assert gnp_sample(4, 1.0, 7) == complete(4)
    assert gnp_sample(0, 0.5, 1).n == 0
    assert gnp_sample(1, 0.5, 1).m == 0


def test_gnp_deterministic_and_simple():
    a, b = gnp_sample(300, 0.05, 42), gnp_sample(300, 0.05, 42)
    assert a == b
    assert gnp_sample(300, 0.05, 43) != a
    for u in range(a.n):
        assert u not in a.adj[u]
        assert list(a.adj[u]) == sorted(set(a.adj[u]))
        for v in a.adj[u]:
            assert u in a.nbr_sets[v]


def test_gnp_edge_count_mean():
    n, p, trials = 2000, 0.004, 200
    N = n * (n - 1) // 2
    mean = sum(gnp_sample(n, p, s).m for s in range(trials)) / trials
    sigma_mean = math.sqrt(N * p * (1 - p) / trials)
    assert abs(mean - N * p) < 3 * sigma_mean


def test_gnp_pair_marginals():
    # each specific pair appears with probability p
    n, p, trials = 6, 0.3, 3000
    counts = {}
    for s in range(trials):
        for e in gnp_sample(n, p, s).edges():
            counts[e] = counts.get(e, 0) + 1
    sd = math.sqrt(p * (1 - p) / trials)
    for u in range(n):
        for v in range(u + 1, n):
            assert abs(counts.get((u, v), 0) / trials - p) < 4.5 * sd


def test_gnp_domain():
    with pytest.raises(DomainError):
        gnp_sample(5, 1.5, 0)
    with pytest.raises(DomainError):
        gnp_sample(-1, 0.5, 0)


def test_neighborhoods():
    P = path(3)
    assert set_neighborhood(P, [1]) == [0, 2]
    assert set_neighborhood(P, [0, 1, 2]) == []
    C5 = cycle(5)
    assert set_neighborhood(C5, [0, 1]) == [2, 4]
    assert closed_neighborhood(complete(3), [0]) == [0, 1, 2]
    assert closed_neighborhood(Graph.empty(3), [1]) == [1]
    assert closed_neighborhood(C5, [0]) == [0, 1, 4]


def test_cross_edges():
    K3 = complete(3)
    assert cross_edge_count(K3, [0, 1, 2], [0, 1, 2]) == 3
    assert cross_edge_count(K3, [0], [1, 2]) == 2
    assert cross_edge_count(cycle(4), [0, 1], [1, 2]) == 2


def test_sigma():
    assert sigma(star(3), [0]) == [1, 2, 3]
    assert sigma(complete(4), [0, 1]) == []
    assert sigma(cycle(5), [0, 1]) == [2, 4]


def test_induced_subgraph():
    K4 = complete(4)
    H, idx = induced_subgraph(K4, [0, 2, 3])
    assert H == complete(3) and idx == {0: 0, 2: 1, 3: 2}
    H, idx = induced_subgraph(cycle(5), [0, 1, 3])
    assert H.edges() == [(0, 1)] and H.n == 3
    G = cycle(6)
    assert induced_subgraph(G, range(6))[0] == G
    H, idx = remove_vertices(G, [0])
    assert H == path(5) and 0 not in idx
    with pytest.raises(DomainError):
        induced_subgraph(G, [6])


def test_edge_list_roundtrip(tmp_path):
    G = parse_edge_list("3 2\n0 1\n1 2\n")
    assert G == path(3)
    f = tmp_path / "g.txt"
    write_edge_list(gnp_sample(40, 0.1, 3), f)
    text = f.read_bytes()
    write_edge_list(read_edge_list(f), f)
    assert f.read_bytes() == text
    # non-canonical order is accepted and normalized
    assert format_edge_list(parse_edge_list("3 2\n2 1\n1 0\n")) == "3 2\n0 1\n1 2\n"


@pytest.mark.parametrize("text,line", [
    ("3 1\n0 0\n", 2),
    ("3 1\n0 5\n", 2),
    ("3 2\n0 1\n1 0\n", 3),
    ("3 2\n0 1\n", 1),
    ("x y\n", 1),
    ("3 1\n0 -1\n", 2),
    ("", 1),
])
def test_parse_errors(text, line):
    with pytest.raises(ParseError) as exc:
        parse_edge_list(text)
    assert exc.value.line == line


def test_gnp_tiny_p_terminates():
    assert gnp_sample(40, 1e-300, 1).m == 0
    assert gnp_sample(40, 5e-324, 2).m == 0
