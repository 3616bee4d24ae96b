"""Shattering, restricted VC-dimension and k-witnesses.

A k-witness maps distinct points ``(x_0, ..., x_k)`` to a labeling that no
member of the class realizes.  Witnesses here wrap either a Python callable
or a machine program code.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

from .classes import EnumeratedClass, MissingOracle
from .hkl import HklClass, _decompose, hkl_I_tuple, hkl_member, hkl_u
from .hypothesis import Hypothesis, LabeledSample, error_count
from .machine import index_of_program, prefix_adapter, run

__all__ = [
    "Witness",
    "Counterexample",
    "BudgetExceeded",
    "VCViolation",
    "shatters",
    "vc_restricted",
    "verify_witness",
    "witness_from_erm",
    "hkl_witness",
    "hkl_diagonalize",
]

MAX_TUPLES = 10**6

Oracle = Callable[[LabeledSample], Optional[Hypothesis]]


class VCViolation(RuntimeError):
    """Every labeling of a tuple was realized: the class shatters it."""


@dataclass(frozen=True)
class Counterexample:
    tuple: tuple[int, ...]
    h: Hypothesis
    e: Optional[int] = None

    def to_json(self) -> dict:
        d = {"tuple": list(self.tuple), "support": list(self.h.support)}
        if self.e is not None:
            d["e"] = self.e
        return d


@dataclass(frozen=True)
class BudgetExceeded:
    e: int
    budget: int

    def to_json(self) -> dict:
        return {"budget_exceeded": True, "e": self.e, "budget": self.budget}


@dataclass(frozen=True)
class Witness:
    """A candidate k-witness; ``map`` is a callable or a program code."""

    k: int
    map: Union[Callable[[tuple[int, ...]], tuple[int, ...]], int]
    budget: int = 10**6

    def __call__(self, xs: Sequence[int]) -> tuple[int, ...]:
        xs = tuple(xs)
        if len(xs) != self.k + 1:
            raise ValueError(f"a {self.k}-witness takes {self.k + 1} points")
        if callable(self.map):
            return tuple(self.map(xs))
        res = run(self.map, xs, self.budget, arity=self.k + 1)
        if not res.halted:
            raise ValueError(f"witness program did not halt on {xs} within {self.budget} steps")
        if any(v > 1 for v in res.output):
            raise ValueError(f"witness program gave non-binary output on {xs}")
        return res.output


def _oracle(cls) -> Oracle:
    if isinstance(cls, EnumeratedClass):
        if cls.find_consistent is None:
            raise MissingOracle(f"{cls.name} has no sample oracle")
        return cls.find_consistent
    if cls is None:
        raise MissingOracle("no sample oracle given")
    return cls


def shatters(cls, points: Sequence[int]) -> bool:
    """Whether every labeling of ``points`` is realized by the class."""
    oracle = _oracle(cls)
    points = tuple(points)
    if len(set(points)) != len(points):
        raise ValueError("points must be distinct")
    if len(points) > 20:
        raise ValueError("at most 20 points")
    if not points:
        return True
    for ys in itertools.product((0, 1), repeat=len(points)):
        if oracle(LabeledSample(tuple(zip(points, ys)))) is None:
            return False
    return True


def vc_restricted(cls, D: int) -> int:
    """Largest size of a subset of ``[0, D]`` shattered by the class."""
    oracle = _oracle(cls)
    dom = range(D + 1)
    best = 0
    for n in range(1, D + 2):
        # subsets of shattered sets are shattered, so stop at the first miss
        if any(shatters(oracle, pts) for pts in itertools.combinations(dom, n)):
            best = n
        else:
            break
    return best


def verify_witness(w: Witness, cls, D: int) -> Optional[Counterexample]:
    """``None`` if ``w`` is a witness on ``[0, D]``, else the first violation.

    Tuples are scanned in lexicographic order over distinct entries.
    """
    oracle = _oracle(cls)
    n_tuples = 1
    for i in range(w.k + 1):
        n_tuples *= max(D + 1 - i, 0)
    if n_tuples > MAX_TUPLES:
        raise ValueError(f"{n_tuples} tuples exceed the cap of {MAX_TUPLES}")
    for xs in itertools.permutations(range(D + 1), w.k + 1):
        ys = w(xs)
        h = oracle(LabeledSample(tuple(zip(xs, ys))))
        if h is not None:
            return Counterexample(xs, h)
    return None


def witness_from_erm(erm: Callable[[LabeledSample], Hypothesis], k: int) -> Witness:
    """k-witness built from a total proper ERM of a class with VC-dimension <= k.

    On distinct points the labelings are tried in lexicographic order and the
    first one the ERM cannot fit is returned.
    """

    def w(xs):
        if len(set(xs)) != len(xs):
            return (0,) * len(xs)
        for ys in itertools.product((0, 1), repeat=len(xs)):
            S = LabeledSample(tuple(zip(xs, ys)))
            if error_count(S, erm(S)) > 0:
                return ys
        raise VCViolation(f"the ERM fits every labeling of {xs}")

    return Witness(k, w)


def hkl_witness(C: HklClass) -> Witness:
    """The computable l-witness for ``H^{k,l}`` (finite l)."""
    if C.ell == float("inf"):
        raise ValueError("needs a finite l")
    ell = int(C.ell)

    def w(xs):
        if len(set(xs)) != len(xs):
            return (0,) * len(xs)
        f = Hypothesis(xs)
        if C.delegated:
            return (1,) * len(xs)
        d = _decompose(C, f)
        if d is None:
            return (1,) * len(xs)
        _, rec = d
        # |supp f| = l + 1 forces f = 1_[k-1] + h_e with o^e all ones
        i = xs.index(rec.u)
        return tuple(0 if j == i else 1 for j in range(len(xs)))

    return Witness(ell, w)


def hkl_diagonalize(C: HklClass, candidate: int, total_out: Optional[int] = None, step_budget: int = 10**4):
    """Refute a candidate (l-1)-witness program for ``H^{k,l}``.

    Returns a :class:`Counterexample` ``(tuple, h, e)`` with ``h`` a member
    whose labeling of ``tuple`` equals the candidate's output, or
    :class:`BudgetExceeded` if the adapted machine ``T_e`` does not halt on
    ``I^e`` within ``step_budget`` steps.  ``total_out`` defaults to ``l``; for
    unbounded ``l`` it is the stand-in value and must be given.
    """
    if C.delegated:
        raise ValueError("k == l: nothing to diagonalize against")
    if total_out is None:
        if C.ell == float("inf"):
            raise ValueError("unbounded l: pass total_out (any value >= k)")
        total_out = int(C.ell)
    k = C.k
    width = total_out - k + 1
    if width < 1:
        raise ValueError("total_out must be at least k")
    if C.range != float("inf") and width != C.range:
        raise ValueError(f"total_out must be l = {C.ell}")
    prefix = tuple(range(1, k))
    adapter = prefix_adapter(candidate, prefix, take_last=width, total_out=total_out)
    e = index_of_program(adapter, width, C.range)
    I = hkl_I_tuple(C, e)
    res = run(adapter, I, step_budget, arity=width)
    if not res.halted:
        return BudgetExceeded(e, step_budget)
    if any(v > 1 for v in res.output):
        raise ValueError("candidate produced a non-binary labeling")
    o, s = res.output, res.steps

    xs = prefix + I
    full = run(candidate, xs, step_budget, arity=total_out)
    if not full.halted:
        return BudgetExceeded(e, step_budget)
    wx = full.output
    g = Hypothesis(tuple(x for x, bit in zip(prefix, wx[: k - 1]) if bit))
    h_e = Hypothesis((hkl_u(C, e, s),) + tuple(x for x, bit in zip(I, o) if bit))
    h = g + h_e
    if not hkl_member(C, h):
        raise AssertionError("diagonal hypothesis rejected by the decider")
    if tuple(h(x) for x in xs) != wx:
        raise AssertionError("candidate output differs from the diagonal labeling")
    return Counterexample(xs, h, e)
