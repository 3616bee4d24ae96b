"""Empirical and structural risk minimizers with exact arithmetic.

The structural risk minimizer works on the singleton decomposition of an
enumerated class, with weight ``omega(n) = 2 n^2`` and penalty
``eps(m, b) = sqrt(b / 2m)``.  Scaled by ``m`` the objective becomes
``F(n) = E_S(h_n) + n sqrt(m b)``; values of this form are compared exactly
by squaring, never in floating point.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Callable, Optional, Sequence

from .classes import EnumeratedClass, MissingOracle, members_within
from .hypothesis import Hypothesis, LabeledSample, error_count

__all__ = [
    "SrmCertificate",
    "erm_hfin",
    "erm_enumerated",
    "epsilon",
    "epsilon_squared",
    "epsilon_at_most",
    "omega",
    "s_of",
    "t_of",
    "m_nu",
    "compare_surd",
    "srm_bound",
    "srm",
    "nonuniform_learner",
    "find_agreeing_output",
    "teaching_set",
]

Learner = Callable[[LabeledSample], Optional[Hypothesis]]


def erm_hfin(S: LabeledSample) -> Hypothesis:
    """Majority vote per point; ties go to label 0."""
    votes: dict[int, int] = {}
    for x, y in S.pairs:
        votes[x] = votes.get(x, 0) + (1 if y else -1)
    return Hypothesis(tuple(x for x, v in votes.items() if v > 0))


def erm_enumerated(cls: EnumeratedClass, S: LabeledSample) -> Hypothesis:
    """Least-index minimizer of the error count over ``cls[0..B(S)]``."""
    if cls.search_bound is None:
        raise MissingOracle(f"{cls.name} has no ERM search bound")
    best, best_err = None, None
    for n in range(cls.search_bound(S) + 1):
        h = cls.enumerate(n)
        err = error_count(S, h)
        if best_err is None or err < best_err:
            best, best_err = h, err
            if err == 0:
                break
    return best


def epsilon_squared(m: int, b: int) -> Fraction:
    return Fraction(b, 2 * m)


def epsilon(m: int, b: int) -> float:
    """Float value for display only; decisions use :func:`epsilon_at_most`."""
    return math.sqrt(b / (2 * m))


def epsilon_at_most(m: int, b: int, q) -> bool:
    """Exact test of ``sqrt(b / 2m) <= q`` for a rational ``q``."""
    q = Fraction(q)
    return q >= 0 and epsilon_squared(m, b) <= q * q


def omega(n: int) -> int:
    return 2 * n * n


def s_of(b: int) -> int:
    return 4 * b**5


def t_of(m: int) -> int:
    """Largest ``b`` with ``s_of(b) <= m``, or 1 if there is none."""
    b = 1
    while s_of(b + 1) <= m:
        b += 1
    return b


def m_nu(a: int, b: int, n_h: int) -> int:
    return s_of(max(a, b, n_h))


def compare_surd(p1: int, q1: int, p2: int, q2: int, r: int) -> int:
    """Sign of ``(p1 + q1 sqrt r) - (p2 + q2 sqrt r)`` for integers, ``r >= 0``."""
    d, c = p1 - p2, q1 - q2
    # sign of d + c sqrt(r)
    if c == 0 or r == 0:
        return (d > 0) - (d < 0)
    if d >= 0 and c >= 0:
        return 1
    if d <= 0 and c <= 0:
        return -1
    lhs, rhs = d * d, c * c * r
    if d > 0:
        return (lhs > rhs) - (lhs < rhs)
    return (rhs > lhs) - (rhs < lhs)


def srm_bound(m: int, b: int) -> int:
    """Least ``N`` with ``N sqrt(mb) >= m + sqrt(mb)``, i.e. ``(N-1)^2 b >= m``."""
    t = isqrt(m // b)
    while t * t * b < m:
        t += 1
    return t + 1


@dataclass(frozen=True)
class SrmCertificate:
    b: int
    m: int
    chosen_n: int
    errors: int
    F_values_examined: int
    N_bound: int

    def objective(self) -> tuple[Fraction, Fraction]:
        """``L_S(h) + eps(m, 2 b n^2)`` as ``(rational part, coefficient of sqrt(b/m))``."""
        return Fraction(self.errors, self.m), Fraction(self.chosen_n)

    def to_json(self) -> dict:
        return {
            "b": self.b,
            "m": self.m,
            "chosen_n": self.chosen_n,
            "errors": self.errors,
            "F_values_examined": self.F_values_examined,
            "N_bound": self.N_bound,
        }


def srm(cls: EnumeratedClass, b: int, S: LabeledSample) -> tuple[Hypothesis, SrmCertificate]:
    """Minimize ``E_S(h_n) + n sqrt(m b)`` over ``n <= N``, least ``n`` on ties."""
    if b < 1:
        raise ValueError("b must be at least 1")
    m = len(S)
    N = srm_bound(m, b)
    r = m * b
    best_n, best_err = 0, error_count(S, cls.enumerate(0))
    for n in range(1, N + 1):
        err = error_count(S, cls.enumerate(n))
        if compare_surd(err, n, best_err, best_n, r) < 0:
            best_n, best_err = n, err
    cert = SrmCertificate(b, m, best_n, best_err, N + 1, N)
    return cls.enumerate(best_n), cert


def nonuniform_learner(cls: EnumeratedClass, S: LabeledSample) -> Hypothesis:
    return srm(cls, t_of(len(S)), S)[0]


def find_agreeing_output(
    learner: Learner,
    h: Hypothesis,
    points: Sequence[int],
    length_cap: int,
) -> Optional[Hypothesis]:
    """First learner output agreeing with ``h`` on ``points``.

    Samples over ``{(x, h(x))}`` are tried by increasing length, then in
    lexicographic order.  ``None`` when ``length_cap`` is exhausted.
    """
    points = tuple(points)
    cells = [(x, h(x)) for x in points]
    for m in range(1, length_cap + 1):
        for pairs in itertools.product(cells, repeat=m):
            g = learner(LabeledSample(pairs))
            if g is not None and all(g(x) == h(x) for x in points):
                return g
    return None


def teaching_set(cls: EnumeratedClass, D: int, h: Hypothesis, max_size: int) -> Optional[tuple[int, ...]]:
    """Smallest subset of ``[0, D]`` on which ``h`` differs from every other member.

    Members are those with support in ``[0, D]``.  Among sets of the least
    size the lexicographically first is returned.
    """
    rivals = [g for g in members_within(cls, D) if g != h]
    for size in range(max_size + 1):
        for pts in itertools.combinations(range(D + 1), size):
            if all(any(g(x) != h(x) for x in pts) for g in rivals):
                return pts
    return None
