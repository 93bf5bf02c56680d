from __future__ import annotations

import math

import pytest
from conftest import complete, cycle, path, shuffle
from oracles import has_k32

from rigidcore.errors import Undecided
from rigidcore.graph import Graph, gnp_sample
from rigidcore.oracle import are_isomorphic
from rigidcore.reconstruction import (Card, Deck, InconsistentDeck, deck, deck_determines,
                                      degree_sequence_from_deck, graph_classes, is_k32_free,
                                      read_deck, reconstruct_exhaustive, reconstruct_from_deck,
                                      write_deck)


def test_deck_examples():
    d = deck(complete(3))
    assert len(d) == 3 and len(set(c.key for c in d.cards)) == 1
    assert d.cards[0].key == (2, ((0, 1),))
    d = deck(path(3))
    sizes = sorted(len(c.edges) for c in d.cards)
    assert sizes == [0, 1, 1]


def test_deck_invariance():
    G = gnp_sample(40, 0.1, 2)
    assert deck(G) == deck(shuffle(G, 5))


def test_k32():
    assert is_k32_free(path(6))
    K32 = Graph.from_edges(5, [(a, b) for a in (0, 1) for b in (2, 3, 4)])
    assert not is_k32_free(K32)
    assert is_k32_free(complete(4))
    for s in range(40):
        G = gnp_sample(9, 0.45, s)
        assert is_k32_free(G) == (not has_k32(G))


def test_degree_sequence():
    assert degree_sequence_from_deck(deck(complete(3))) == [2, 2, 2]
    assert degree_sequence_from_deck(deck(path(3))) == [1, 1, 2]
    assert degree_sequence_from_deck(deck(Graph.empty(5))) == [0] * 5
    G = gnp_sample(30, 0.2, 1)
    assert degree_sequence_from_deck(deck(G)) == sorted(G.degrees())
    bad = Deck([Card(2, ((0, 1),)), Card(2, ()), Card(1, ())])
    with pytest.raises(InconsistentDeck):
        degree_sequence_from_deck(bad)


def test_reconstruct_random():
    n = 80
    for s in range(3):
        G = gnp_sample(n, 1.8 * math.log(n) / n, s)
        res = reconstruct_from_deck(deck(G))
        assert res.ok and are_isomorphic(res.graph, G)


def test_c5_fails_then_fallback():
    d = deck(cycle(5))
    res = reconstruct_from_deck(d)
    assert not res.ok and res.step == "iv"
    fb = reconstruct_exhaustive(d)
    assert fb.ok and are_isomorphic(fb.graph, cycle(5))


def test_tampered_deck_detected():
    n = 40
    G = gnp_sample(n, 1.8 * math.log(n) / n, 7)
    d = deck(G)
    cards = list(d.cards)
    H = cards[0].graph()
    missing = next((u, v) for u in range(H.n) for v in range(u + 1, H.n) if not H.has_edge(u, v))
    cards[0] = Card(H.n, tuple(sorted(H.edges() + [missing])))
    res = reconstruct_from_deck(Deck(cards))
    assert not res.ok and res.step in ("i", "ii", "iv")
    cards[1] = Card(H.n, cards[1].edges[1:])
    res = reconstruct_from_deck(Deck(cards))
    assert not res.ok and res.step in ("i", "ii", "iv")


def test_deck_determines_small():
    assert all(deck_determines(G) for G in graph_classes(3))
    for s in range(5):
        G = gnp_sample(7, 0.4, s)
        assert deck_determines(G)
    # two vertices: K2 and its complement share the deck
    assert deck(complete(2)) == deck(Graph.empty(2))
    with pytest.raises(Undecided):
        deck_determines(gnp_sample(12, 0.3, 0))


def test_recon_agrees_with_exhaustive_n7():
    successes = 0
    for G in graph_classes(7):
        d = deck(G)
        res = reconstruct_from_deck(d)
        fb = reconstruct_exhaustive(d)
        assert fb.ok and are_isomorphic(fb.graph, G)
        if res.ok:
            successes += 1
            assert are_isomorphic(res.graph, G)
            assert deck_determines(G)
    assert successes > 500


def test_deck_io(tmp_path):
    G = gnp_sample(25, 0.2, 3)
    d = deck(G)
    write_deck(d, tmp_path / "d")
    assert read_deck(tmp_path / "d") == d
