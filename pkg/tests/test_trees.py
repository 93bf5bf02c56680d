from __future__ import annotations

import pytest
from oracles import prufer_trees, tree_isomorphic

from rigidcore.errors import DomainError
from rigidcore.trees import free_tree_code, rooted_tree_code, tree_centers

ROOTED_COUNTS = [1, 1, 2, 4, 9, 20, 48]      # rooted unlabelled trees on 1..7 vertices
FREE_COUNTS = [1, 1, 1, 2, 3, 6, 11, 23]     # free unlabelled trees on 1..8 vertices


def test_small_examples():
    assert rooted_tree_code({0: []}, 0)[0] == "()"
    star = {0: [1, 2, 3], 1: [0], 2: [0], 3: [0]}
    assert rooted_tree_code(star, 0)[0] != rooted_tree_code(star, 1)[0]
    p4 = {0: [1], 1: [0, 2], 2: [1, 3], 3: [2]}
    assert tree_centers(p4) == [1, 2]
    a = free_tree_code({0: [1], 1: [0, 2], 2: [1]})[0]
    b = free_tree_code({5: [7, 9], 7: [5], 9: [5]})[0]
    assert a == b


def test_positions_are_preorder_and_invariant():
    t = {0: [1, 2], 1: [0, 3], 2: [0], 3: [1]}
    code, pos = rooted_tree_code(t, 0)
    assert sorted(pos.values()) == [0, 1, 2, 3] and pos[0] == 0
    # relabel and compare positions of corresponding vertices
    ren = {0: 10, 1: 12, 2: 11, 3: 13}
    t2 = {ren[u]: [ren[w] for w in ws] for u, ws in t.items()}
    code2, pos2 = rooted_tree_code(t2, 10)
    assert code2 == code
    assert all(pos2[ren[u]] == pos[u] for u in t)


def test_bad_trees():
    with pytest.raises(DomainError):
        rooted_tree_code({0: [1], 1: [0, 2], 2: [1, 0]}, 0)      # edge count wrong (cycle)
    with pytest.raises(DomainError):
        free_tree_code({0: [1], 1: [0], 2: [3], 3: [2]})
    with pytest.raises(DomainError):
        rooted_tree_code({0: []}, 5)


@pytest.mark.parametrize("n", range(1, 6))
def test_rooted_codes_against_oracle_small(n):
    classes: dict[str, tuple] = {}
    for t in prufer_trees(n):
        for r in t:
            code, _ = rooted_tree_code(t, r)
            if code in classes:
                assert tree_isomorphic(t, classes[code][0], r, classes[code][1])
            else:
                classes[code] = (t, r)
    assert len(classes) == ROOTED_COUNTS[n - 1]
    reps = list(classes.values())
    for i, (a, ra) in enumerate(reps):
        for b, rb in reps[i + 1:]:
            assert not tree_isomorphic(a, b, ra, rb)
