"""Finitely supported hypotheses, labeled samples and exact empirical losses."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .machine import Instr, encode_program

__all__ = [
    "Hypothesis",
    "LabeledSample",
    "ZERO",
    "eval_hypothesis",
    "error_count",
    "empirical_loss",
    "hfin_list",
    "hfin_index",
    "hypothesis_to_code",
    "code_budget",
    "all_samples",
]


@dataclass(frozen=True)
class Hypothesis:
    """Indicator function of a finite set of naturals."""

    support: tuple[int, ...] = ()

    def __post_init__(self):
        supp = tuple(sorted(set(int(x) for x in self.support)))
        if supp and supp[0] < 0:
            raise ValueError("support must consist of naturals")
        object.__setattr__(self, "support", supp)
        object.__setattr__(self, "_set", frozenset(supp))

    def __call__(self, x: int) -> int:
        return 1 if x in self._set else 0

    def __add__(self, other: "Hypothesis") -> "Hypothesis":
        if self._set & other._set:
            raise ValueError("direct sum needs disjoint supports")
        return Hypothesis(self.support + other.support)

    def __contains__(self, x: int) -> bool:
        return x in self._set

    def __len__(self) -> int:
        return len(self.support)

    def __repr__(self) -> str:
        return f"Hypothesis({set(self.support) or '{}'})"

    @property
    def support_set(self) -> frozenset:
        return self._set

    def to_json(self) -> dict:
        return {"support": list(self.support)}

    @classmethod
    def from_json(cls, obj) -> "Hypothesis":
        if isinstance(obj, str):
            obj = json.loads(obj)
        supp = obj["support"]
        if not isinstance(supp, list) or not all(isinstance(x, int) and x >= 0 for x in supp):
            raise ValueError("support must be a list of naturals")
        return cls(tuple(supp))


ZERO = Hypothesis()


@dataclass(frozen=True)
class LabeledSample:
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple((int(x), int(y)) for x, y in self.pairs)
        if not pairs:
            raise ValueError("a sample has at least one labeled pair")
        for x, y in pairs:
            if x < 0 or y not in (0, 1):
                raise ValueError(f"bad labeled pair {(x, y)}")
        object.__setattr__(self, "pairs", pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    @property
    def points(self) -> tuple[int, ...]:
        return tuple(x for x, _ in self.pairs)

    def is_consistent(self) -> bool:
        """No point carries both labels."""
        seen: dict[int, int] = {}
        for x, y in self.pairs:
            if seen.setdefault(x, y) != y:
                return False
        return True

    def to_json(self) -> dict:
        return {"pairs": [list(p) for p in self.pairs]}

    @classmethod
    def from_json(cls, obj) -> "LabeledSample":
        if isinstance(obj, str):
            obj = json.loads(obj)
        pairs = obj["pairs"]
        if not isinstance(pairs, list):
            raise ValueError("'pairs' must be a list")
        for p in pairs:
            if not (isinstance(p, list) and len(p) == 2 and all(isinstance(v, int) for v in p)):
                raise ValueError(f"malformed pair {p!r}")
        return cls(tuple(tuple(p) for p in pairs))


def eval_hypothesis(h: Hypothesis, x: int) -> int:
    return h(x)


def error_count(S: LabeledSample, h: Hypothesis) -> int:
    return sum(1 for x, y in S.pairs if h(x) != y)


def empirical_loss(S: LabeledSample, h: Hypothesis) -> Fraction:
    return Fraction(error_count(S, h), len(S))


def hfin_list(n: int) -> Hypothesis:
    """The ``n``-th finitely supported hypothesis: support = set bits of ``n``."""
    if n < 0:
        raise ValueError("index must be a natural")
    return Hypothesis(tuple(i for i in range(n.bit_length()) if n >> i & 1))


def hfin_index(h: Hypothesis) -> int:
    return sum(1 << x for x in h.support)


def hypothesis_to_code(h: Hypothesis) -> int:
    """Code of a machine program computing ``h`` on one-tuples.

    The program counts the input down, deciding membership at each value
    ``0..max(supp)``; see :func:`code_budget` for a sufficient step budget.
    """
    top = h.support[-1] if h.support else -1
    blocks = 2 * (top + 1)
    out0, out1 = blocks, blocks + 2
    prog: list[Instr] = []
    for t in range(top + 1):
        prog.append(Instr("JZ", 1, out1 if t in h else out0))
        prog.append(Instr("DEC", 1))
    prog += [Instr("ZERO", 1), Instr("HALT"), Instr("INC", 1)]
    return encode_program(prog)


def code_budget(h: Hypothesis) -> int:
    top = h.support[-1] if h.support else -1
    return 2 * (top + 1) + 2


def all_samples(points: Sequence[int], max_len: int, labels: Iterable[int] = (0, 1)) -> Iterator[LabeledSample]:
    """Every sample of length ``1..max_len`` over ``points x labels``, shortest first."""
    cells = [(x, y) for x in points for y in labels]
    for m in range(1, max_len + 1):
        for pairs in itertools.product(cells, repeat=m):
            yield LabeledSample(pairs)
