"""Exact multinomial point probabilities and mode search.

Probability vectors may hold floats or ``fractions.Fraction``.  With Fractions every
computation here is exact, which is what the maximizer checks rely on: a rounding
error must never manufacture or hide a tie.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from rigidcore.errors import DomainError, Undecided

SUM_TOL = 1e-12


def _check_vector(p: Sequence) -> None:
    if not p:
        raise DomainError("empty probability vector")
    if any(x < 0 for x in p):
        raise DomainError("negative probability")
    if abs(float(sum(p)) - 1.0) > SUM_TOL:
        raise DomainError(f"probabilities sum to {float(sum(p))}, not 1")


def multinomial_coefficient(a: Sequence[int]) -> int:
    out = 1
    total = 0
    for x in a:
        total += x
        out *= math.comb(total, x)
    return out


def multinomial_pmf(m: int, p: Sequence, a: Sequence[int], exact: bool = False):
    """Pr(X = a) for X ~ Multinomial(m, p).

    Floats go through log-space; ``exact=True`` (or Fraction input) returns a Fraction.
    """
    if len(a) != len(p):
        raise DomainError("count vector and probability vector differ in length")
    if any(x < 0 for x in a) or sum(a) != m:
        raise DomainError(f"counts {list(a)} do not sum to m={m}")
    _check_vector(p)
    if exact or all(isinstance(x, (int, Fraction)) for x in p):
        out = Fraction(multinomial_coefficient(a))
        for pi, ai in zip(p, a):
            out *= Fraction(pi) ** ai
        return out
    logv = math.lgamma(m + 1)
    for pi, ai in zip(p, a):
        if ai == 0:
            continue
        if pi == 0:
            return 0.0
        logv += ai * math.log(pi) - math.lgamma(ai + 1)
    return math.exp(logv)


def compositions(m: int, k: int) -> Iterator[tuple[int, ...]]:
    """All vectors of k non-negative integers summing to m."""
    if k == 1:
        yield (m,)
        return
    for first in range(m + 1):
        for rest in compositions(m - first, k - 1):
            yield (first, *rest)


@dataclass
class MultinomialMode:
    counts: tuple[int, ...]
    pmax: float | Fraction


def _floors(m: int, p: Sequence) -> list[int]:
    # exact for Fractions; for floats, tolerate products like 10 * 0.3 landing just below an integer
    return [math.floor(Fraction(m) * Fraction(x)) if isinstance(x, Fraction)
            else math.floor(m * x + 1e-12) for x in p]


def multinomial_mode(m: int, p: Sequence, budget: int = 2_000_000) -> MultinomialMode:
    """A maximizer of the multinomial pmf.

    Every maximizer has ``a_t >= floor(m p_t)``, so the search only distributes the
    remainder ``m - sum(floors) < k`` over the k coordinates.
    """
    if m < 0:
        raise DomainError("negative m")
    _check_vector(p)
    k = len(p)
    base = _floors(m, p)
    rest = m - sum(base)
    if rest < 0:
        base = [0] * k
        rest = m
    if math.comb(rest + k - 1, k - 1) > budget:
        raise Undecided(f"mode search over {math.comb(rest + k - 1, k - 1)} candidates exceeds budget")
    best = None
    for extra in compositions(rest, k):
        a = tuple(b + e for b, e in zip(base, extra))
        v = multinomial_pmf(m, p, a)
        if best is None or v > best.pmax:
            best = MultinomialMode(a, v)
    assert all(a >= b for a, b in zip(best.counts, _floors(m, p)))
    return best


def binomial_prob_vector(k: int, p) -> list:
    """(C(k,i) p^i q^(k-i))_{i=0..k}."""
    if not 0 < p <= 0.5:
        raise DomainError(f"p={p} outside (0, 1/2]")
    if k < 0:
        raise DomainError("negative k")
    q = 1 - p
    return [math.comb(k, i) * p ** i * q ** (k - i) for i in range(k + 1)]


def all_maximizers(m: int, p: Sequence) -> tuple[Fraction, list[tuple[int, ...]]]:
    """Exhaustive: the max pmf and every composition attaining it (exact arithmetic)."""
    p = [Fraction(x) for x in p]
    # p_i = c_i / D: compare the integers coef(a) * prod c_i^a_i instead of Fractions
    D = math.lcm(*(x.denominator for x in p))
    c = [int(x * D) for x in p]
    best = -1
    arg: list[tuple[int, ...]] = []
    for a in compositions(m, len(p)):
        w = multinomial_coefficient(a)
        for ci, ai in zip(c, a):
            w *= ci ** ai
        if w > best:
            best, arg = w, [a]
        elif w == best:
            arg.append(a)
    return Fraction(best, D ** m), arg


def verify_lemma1(m: int, p: Sequence) -> bool:
    """Every global maximizer satisfies ``a_t >= floor(m p_t)`` (no pruning used)."""
    fp = [Fraction(x) for x in p]
    floors = [math.floor(m * x) for x in fp]
    _, arg = all_maximizers(m, fp)
    return all(all(a >= f for a, f in zip(vec, floors)) for vec in arg)


def probability_grid(k: int, step: Fraction) -> Iterator[tuple[Fraction, ...]]:
    """Probability vectors of length k whose entries are multiples of ``step``."""
    units = int(1 / step)
    if Fraction(units) * step != 1:
        raise DomainError("grid step must divide 1")
    for c in compositions(units, k):
        yield tuple(step * x for x in c)


def verify_lemma1_grid(max_m: int, max_k: int, step: Fraction = Fraction(1, 20)) -> tuple[int, list]:
    """Run ``verify_lemma1`` on every (m, p) with m <= max_m, 1 <= k <= max_k. Returns (cases, failures)."""
    cases = 0
    failures = []
    for k in range(1, max_k + 1):
        for p in probability_grid(k, step):
            for m in range(max_m + 1):
                cases += 1
                if not verify_lemma1(m, p):
                    failures.append((m, p))
    return cases, failures


MAX_CATEGORIES = 12


@dataclass
class ProfileRow:
    m: int
    pi: float | None
    statistic: float | None
    folded_mass: float
    undecided: bool = False


def _truncate(p: Sequence[float], keep: int) -> tuple[list[float], float]:
    """Keep the heaviest window of ``keep`` consecutive categories; fold the tails into its ends."""
    if len(p) <= keep:
        return list(p), 0.0
    start = max(range(len(p) - keep + 1), key=lambda s: sum(p[s:s + keep]))
    window = list(p[start:start + keep])
    left, right = sum(p[:start]), sum(p[start + keep:])
    window[0] += left
    window[-1] += right
    return window, left + right


def pi_decay_profile(k: int, p: float, m_values: Sequence[int],
                     budget: int = 2_000_000) -> list[ProfileRow]:
    """Pi(m, binomial(k, p) vector) per m, with log(Pi) / (sqrt(m) log m).

    Beyond ``MAX_CATEGORIES`` categories the tails are folded into the window ends;
    merging categories can only raise Pi, so a folded row is an upper bound.
    """
    vec, folded = _truncate(binomial_prob_vector(k, p), MAX_CATEGORIES)
    s = sum(vec)
    vec = [x / s for x in vec]
    rows = []
    for m in m_values:
        try:
            pi = multinomial_mode(m, vec, budget).pmax
        except Undecided:
            rows.append(ProfileRow(m, None, None, folded, True))
            continue
        stat = math.log(pi) / (math.sqrt(m) * math.log(m)) if m > 1 and pi > 0 else None
        rows.append(ProfileRow(m, float(pi), stat, folded))
    return rows


def brute_force_pi(m: int, p: Sequence) -> float:
    """max over all compositions, float arithmetic; test oracle."""
    return max(multinomial_pmf(m, p, a) for a in compositions(m, len(p)))

