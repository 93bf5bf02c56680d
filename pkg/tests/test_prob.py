from __future__ import annotations

import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import pmf_by_sequences

from rigidcore.errors import DomainError, Undecided
from rigidcore.prob import (all_maximizers, binomial_prob_vector, brute_force_pi, compositions,
                            multinomial_mode, multinomial_pmf, pi_decay_profile, verify_lemma1,
                            verify_lemma1_grid)


def test_pmf_examples():
    assert multinomial_pmf(2, (0.5, 0.5), (1, 1)) == pytest.approx(0.5)
    assert multinomial_pmf(3, (F(1, 3),) * 3, (3, 0, 0)) == F(1, 27)
    assert multinomial_pmf(10, (0.2, 0.8), (2, 8)) == pytest.approx(0.301989888, abs=1e-9)
    with pytest.raises(DomainError):
        multinomial_pmf(3, (0.5, 0.5), (1, 1))
    with pytest.raises(DomainError):
        multinomial_pmf(2, (0.5, 0.6), (1, 1))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 5), st.lists(st.integers(1, 9), min_size=1, max_size=3))
def test_pmf_matches_sequences(m, w):
    p = [x / sum(w) for x in w]
    for a in compositions(m, len(p)):
        assert multinomial_pmf(m, p, a) == pytest.approx(pmf_by_sequences(m, p, a), rel=1e-9, abs=1e-15)


def test_mode_examples():
    mode = multinomial_mode(2, (0.5, 0.5))
    assert mode.counts == (1, 1) and mode.pmax == pytest.approx(0.5)
    mode = multinomial_mode(3, (F(1, 3),) * 3)
    assert mode.counts == (1, 1, 1) and mode.pmax == F(2, 9)
    mode = multinomial_mode(0, (0.3, 0.7))
    assert mode.counts == (0, 0) and mode.pmax == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 12), st.lists(st.integers(0, 9), min_size=1, max_size=4))
def test_mode_matches_brute_force(m, w):
    if sum(w) == 0:
        return
    p = [F(x, sum(w)) for x in w]
    best, _ = all_maximizers(m, p)
    assert multinomial_mode(m, p).pmax == best
    assert brute_force_pi(m, [float(x) for x in p]) == pytest.approx(float(best))


def test_mode_budget():
    with pytest.raises(Undecided):
        multinomial_mode(50, [1 / 30] * 30, budget=10)


def test_binomial_vector():
    assert binomial_prob_vector(1, 0.5) == [0.5, 0.5]
    assert binomial_prob_vector(2, 0.5) == [0.25, 0.5, 0.25]
    assert binomial_prob_vector(4, 0.3) == pytest.approx([0.2401, 0.4116, 0.2646, 0.0756, 0.0081])
    with pytest.raises(DomainError):
        binomial_prob_vector(3, 0.7)


def test_lemma1_examples():
    assert verify_lemma1(1, (F(9, 10), F(1, 10)))
    assert verify_lemma1(5, (F(1), F(0)))
    cases, failures = verify_lemma1_grid(4, 3, F(1, 10))
    assert cases > 0 and failures == []


def test_pi_profile():
    rows = pi_decay_profile(3, 0.3, [1, 2, 9])
    vec = binomial_prob_vector(3, 0.3)
    assert rows[0].pi == pytest.approx(max(vec))
    assert rows[1].pi == pytest.approx(brute_force_pi(2, vec))
    assert rows[0].statistic is None and rows[2].statistic is not None
    rows = pi_decay_profile(6, 0.5, [2])
    assert rows[0].pi == pytest.approx(brute_force_pi(2, binomial_prob_vector(6, 0.5)))
    wide = pi_decay_profile(40, 0.5, [3])
    assert wide[0].folded_mass > 0 and not math.isnan(wide[0].pi)


def test_binomial_vector_consistent_with_pmf():
    for k in range(0, 9):
        for p in (0.05, 0.2, 0.37, 0.5):
            vec = binomial_prob_vector(k, p)
            assert abs(sum(vec) - 1) < 1e-12
            for i, x in enumerate(vec):
                assert x == pytest.approx(multinomial_pmf(k, (p, 1 - p), (i, k - i)), rel=1e-12)


def test_log_space_pmf_matches_exact():
    from rigidcore.prob import probability_grid
    for k in (2, 3):
        for p in probability_grid(k, F(1, 10)):
            fp = [float(x) for x in p]
            for m in range(11):
                for a in compositions(m, k):
                    exact = multinomial_pmf(m, p, a, exact=True)
                    approx = multinomial_pmf(m, fp, a)
                    assert approx == pytest.approx(float(exact), rel=1e-12, abs=0)


def test_mode_matches_exhaustive_grid():
    from rigidcore.prob import probability_grid
    for k in range(1, 5):
        for p in probability_grid(k, F(1, 20)):
            for m in range(0, 11, 3):
                assert multinomial_mode(m, p).pmax == all_maximizers(m, p)[0]
