"""The class H^{k,l}: VC-dimension k, effective VC-dimension l.

The class is ``G (+) H_E`` where ``G`` is the cube on ``{1, ..., k-1}`` and
``H_E`` holds, for each machine index ``e`` that halts on its designated
input ``I^e`` with a binary output ``o^e``, the hypothesis ``h_e`` that is 1
at the marker point ``u_e``, equal to ``o^e`` on ``I^e`` and 0 elsewhere.

Conventions fixed here:

* ``k'`` is ``k`` rounded up to even.  Input slots are the sequence
  ``0, k', k'+2, k'+4, ...``; ``I^e`` takes the next ``k_e`` slots in index
  order, so slot positions are prefix sums of ``k_0, k_1, ...`` (computed in
  closed form, which matters because diagonalization produces huge ``e``).
* The marker is odd and larger than ``k'``.  ``marker="cantor"`` (default)
  uses ``u = 2*pair(e, s) + k' + 1``; ``marker="prime_power"`` uses
  ``u = 2 * 3**e * 5**s + k' + 1``, which is only usable for small ``e``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb
from typing import Optional

from .classes import EnumeratedClass, class_cube, class_support_at_most
from .codec import pair, unpair
from .hypothesis import Hypothesis, LabeledSample
from .machine import UNBOUNDED, binary_output_at_exact_step, pair_enum, run

__all__ = [
    "HklClass",
    "ERecord",
    "Undecided",
    "hkl_build",
    "hkl_I_tuple",
    "hkl_slot_prefix",
    "hkl_u",
    "hkl_decode_marker",
    "hkl_explore_E",
    "hkl_record",
    "hkl_member",
    "hkl_find_consistent",
]

MAX_PRIME_POWER_INDEX = 100_000


class Undecided(RuntimeError):
    """E-membership could not be settled within the step budget."""


@dataclass(frozen=True)
class HklClass:
    k: int
    ell: float
    marker: str = "cantor"

    @property
    def delegated(self) -> bool:
        """``k == l``: the class is all hypotheses of support size ``<= k``."""
        return self.k == self.ell

    @property
    def range(self):
        return UNBOUNDED if self.ell == math.inf else int(self.ell) - self.k + 1

    @property
    def kprime(self) -> int:
        return self.k + self.k % 2

    @property
    def u_offset(self) -> int:
        return self.kprime + 1

    def as_class(self, step_budget: int = 100_000) -> EnumeratedClass:
        if self.delegated:
            return class_support_at_most(self.k)
        return _as_enumerated(self, step_budget)


@dataclass(frozen=True)
class ERecord:
    e: int
    k_e: int
    s_e: int
    o: tuple[int, ...]
    u: int
    h: Hypothesis

    def to_json(self) -> dict:
        return {
            "e": self.e,
            "k_e": self.k_e,
            "s_e": self.s_e,
            "o": list(self.o),
            "u": self.u,
            "support": list(self.h.support),
        }


def hkl_build(k: int, ell, marker: str = "cantor") -> HklClass:
    if k < 1:
        raise ValueError("k must be at least 1")
    if ell != math.inf and (int(ell) != ell or ell < k):
        raise ValueError(f"need k <= l, got k={k}, l={ell}")
    if marker not in ("cantor", "prime_power"):
        raise ValueError(f"unknown marker scheme {marker!r}")
    return HklClass(k, ell if ell == math.inf else int(ell), marker)


# -- input slots -----------------------------------------------------------


def _block_sum(n: int, r) -> int:
    """sum of ((i mod r) + 1) for i < n; r may be unbounded."""
    if r == UNBOUNDED:
        return comb(n + 1, 2)
    q, t = divmod(n, r)
    return n + comb(r, 2) * q + comb(t, 2)


def _diagonals_sum(D: int, r) -> int:
    """sum of _block_sum(n, r) for n = 0..D."""
    if r == UNBOUNDED:
        return comb(D + 2, 3)
    q, t = divmod(D + 1, r)
    return comb(D + 1, 2) + comb(r, 2) * (r * comb(q, 2) + t * q) + q * comb(r, 3) + comb(t, 3)


def hkl_slot_prefix(C: HklClass, e: int) -> int:
    """``k_0 + ... + k_{e-1}``: the first slot of ``I^e``.

    Index ``e`` sits at position ``b`` of Cantor diagonal ``d``; diagonal
    ``j`` holds ``j + 1`` indices whose arities are ``(i mod r) + 1``.
    """
    a, b = unpair(e)
    return _diagonals_sum(a + b, C.range) + _block_sum(b, C.range)


def _slot_value(C: HklClass, p: int) -> int:
    return 0 if p == 0 else C.kprime + 2 * (p - 1)


def _value_slot(C: HklClass, x: int) -> Optional[int]:
    if x == 0:
        return 0
    if x >= C.kprime and x % 2 == 0:
        return (x - C.kprime) // 2 + 1
    return None


def hkl_I_tuple(C: HklClass, j: int) -> tuple[int, ...]:
    _, k_j = pair_enum(j, C.range)
    start = hkl_slot_prefix(C, j)
    return tuple(_slot_value(C, start + i) for i in range(k_j))


def _slot_owner(C: HklClass, p: int) -> int:
    lo, hi = 0, p
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if hkl_slot_prefix(C, mid) <= p:
            lo = mid
        else:
            hi = mid - 1
    return lo


# -- markers ---------------------------------------------------------------


def hkl_u(C: HklClass, e: int, s: int) -> int:
    if C.marker == "cantor":
        return 2 * pair(e, s) + C.u_offset
    if e > MAX_PRIME_POWER_INDEX:
        raise OverflowError(f"3**{e} is too large; use the cantor marker")
    return 2 * 3**e * 5**s + C.u_offset


def hkl_decode_marker(C: HklClass, x: int) -> Optional[tuple[int, int]]:
    v = x - C.u_offset
    if v < 0 or v % 2:
        return None
    v //= 2
    if C.marker == "cantor":
        return unpair(v)
    if v == 0:
        return None
    e = s = 0
    while v % 3 == 0:
        v //= 3
        e += 1
    while v % 5 == 0:
        v //= 5
        s += 1
    return (e, s) if v == 1 else None


# -- the halting set -------------------------------------------------------


def _h_e(C: HklClass, e: int, I: tuple[int, ...], o: tuple[int, ...], s: int) -> ERecord:
    u = hkl_u(C, e, s)
    supp = (u,) + tuple(x for x, bit in zip(I, o) if bit)
    return ERecord(e, len(I), s, o, u, Hypothesis(supp))


def hkl_record(C: HklClass, e: int, step_budget: int) -> Optional[ERecord]:
    """The record of ``e`` if ``T_e`` halts on ``I^e`` with binary output in budget.

    ``None`` means "not confirmed": either ``e`` is not in E or more steps
    are needed.
    """
    code, k_e = pair_enum(e, C.range)
    I = hkl_I_tuple(C, e)
    res = run(code, I, step_budget, arity=k_e)
    if not res.halted or any(v > 1 for v in res.output):
        return None
    return _h_e(C, e, I, res.output, res.steps)


def hkl_explore_E(C: HklClass, index_budget: int, step_budget: int) -> list[ERecord]:
    """Records for every ``e <= index_budget`` confirmed within ``step_budget``.

    Omitted indices are unknown, not excluded.
    """
    if index_budget < 1 or step_budget < 1:
        raise ValueError("budgets must be positive")
    if C.delegated:
        return []
    out = []
    for e in range(index_budget + 1):
        rec = hkl_record(C, e, step_budget)
        if rec is not None:
            out.append(rec)
    return out


# -- membership ------------------------------------------------------------


def _decompose(C: HklClass, h: Hypothesis):
    """``(g, record)`` with ``h = g + h_e`` (record None for ``h = g``), or None."""
    k = C.k
    odd = [x for x in h.support if x % 2 == 1 and x > C.kprime]
    if len(odd) > 1:
        return None
    if not odd:
        return (h, None) if all(1 <= x <= k - 1 for x in h.support) else None
    x = odd[0]
    es = hkl_decode_marker(C, x)
    if es is None:
        return None
    e, s = es
    code, k_e = pair_enum(e, C.range)
    I = hkl_I_tuple(C, e)
    o = binary_output_at_exact_step(code, I, s, k_e)
    if o is None:
        return None
    if any(h(xi) != oi for xi, oi in zip(I, o)):
        return None
    rest = h.support_set - {x} - set(I)
    if not all(1 <= y <= k - 1 for y in rest):
        return None
    return Hypothesis(tuple(rest)), _h_e(C, e, I, o, s)


def hkl_member(C: HklClass, h: Hypothesis) -> bool:
    """Exact membership test.

    Runs ``T_e`` for at most the ``s`` encoded in the marker, so it always
    terminates, though a huge marker means a long simulation.
    """
    if C.delegated:
        return len(h) <= C.k
    return _decompose(C, h) is not None


def hkl_find_consistent(C: HklClass, S: LabeledSample, step_budget: int = 100_000) -> Optional[Hypothesis]:
    """A member with zero empirical loss on ``S``, or None.

    Points labeled 1 outside ``{1..k-1}`` must all lie in one ``supp(h_e)``.
    When they only hit input slots, ``e`` is identified from the slot but
    E-membership is semi-decidable; ``Undecided`` is raised if ``T_e`` is
    still running after ``step_budget`` steps.
    """
    if C.delegated:
        return class_support_at_most(C.k).find_consistent(S)
    lab: dict[int, int] = {}
    for x, y in S.pairs:
        if lab.setdefault(x, y) != y:
            return None
    k = C.k
    g = Hypothesis(tuple(x for x, y in lab.items() if y == 1 and 1 <= x <= k - 1))
    outside = [x for x, y in lab.items() if y == 1 and not 1 <= x <= k - 1]
    if not outside:
        return g

    owners = set()
    marker_es = None
    for x in outside:
        if x % 2 == 1 and x > C.kprime:
            es = hkl_decode_marker(C, x)
            if es is None:
                return None
            owners.add(es[0])
            if marker_es is not None and marker_es != es:
                return None
            marker_es = es
        else:
            p = _value_slot(C, x)
            if p is None:
                return None
            owners.add(_slot_owner(C, p))
    if len(owners) != 1:
        return None
    (e,) = owners
    code, k_e = pair_enum(e, C.range)
    I = hkl_I_tuple(C, e)
    if marker_es is not None:
        o = binary_output_at_exact_step(code, I, marker_es[1], k_e)
        if o is None:
            return None
        rec = _h_e(C, e, I, o, marker_es[1])
    else:
        res = run(code, I, step_budget, arity=k_e)
        if not res.halted:
            raise Undecided(f"T_{e} still running after {step_budget} steps")
        if any(v > 1 for v in res.output):
            return None
        rec = _h_e(C, e, I, res.output, res.steps)
    if any(rec.h(x) != y for x, y in lab.items() if not 1 <= x <= k - 1):
        return None
    return g + rec.h


def _as_enumerated(C: HklClass, step_budget: int) -> EnumeratedClass:
    cube = class_cube(C.k)

    def enum(n):
        gi, r = unpair(n)
        g = cube.enumerate(gi)
        if r == 0:
            return g
        e, s = unpair(r - 1)
        code, k_e = pair_enum(e, C.range)
        I = hkl_I_tuple(C, e)
        o = binary_output_at_exact_step(code, I, s, k_e)
        return g if o is None else g + _h_e(C, e, I, o, s).h

    def index_of(h):
        d = _decompose(C, h)
        if d is None:
            raise ValueError(f"{h} is not in the class")
        g, rec = d
        r = 0 if rec is None else pair(rec.e, rec.s_e) + 1
        return pair(cube.index_of(g), r)

    return EnumeratedClass(
        name=f"H^{{{C.k},{C.ell}}}",
        enumerate=enum,
        member=lambda h: hkl_member(C, h),
        find_consistent=lambda S: hkl_find_consistent(C, S, step_budget),
        index_of=index_of,
        meta={"kind": "hkl", "k": C.k, "l": C.ell, "marker": C.marker},
    )
