"""Finite-support distributions and seeded Monte-Carlo checks of PAC guarantees.

Randomness: trial ``i`` of a run with base seed ``seed`` uses the seed
``mix64(seed, i)`` (SplitMix64 finalizer applied to
``seed + (i + 1) * 0x9E3779B97F4A7C15 mod 2**64``) to initialize a numpy
PCG64 generator.  Samples are drawn by inverse CDF over the atoms sorted by
``(x, y)``, with exact integer weights, so a run is fully determined by its
arguments and the same whatever the number of worker threads.
"""
from __future__ import annotations

import itertools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .classes import EnumeratedClass, class_from_spec
from .hypothesis import Hypothesis, LabeledSample, empirical_loss
from .learners import epsilon_squared, erm_enumerated, erm_hfin, m_nu, nonuniform_learner, srm

__all__ = [
    "FiniteDistribution",
    "TrialReport",
    "CurveConfig",
    "mix64",
    "true_loss",
    "uniform_on_sample",
    "is_realizable",
    "realizes_sample",
    "inf_loss",
    "sample_iid",
    "pac_trial_suite",
    "nonuniform_trial_suite",
    "hoeffding_check",
    "deviation_probability",
    "make_learner",
    "experiment_curve",
]

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MAX_INF_POINTS = 16

Learner = Callable[[LabeledSample], Optional[Hypothesis]]


def mix64(seed: int, i: int) -> int:
    z = (seed + (i + 1) * GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class FiniteDistribution:
    """Exact probabilities on finitely many labeled points."""

    atoms: tuple[tuple[tuple[int, int], Fraction], ...]

    def __post_init__(self):
        merged: dict[tuple[int, int], Fraction] = {}
        for (x, y), p in self.atoms:
            p = Fraction(p)
            if x < 0 or y not in (0, 1):
                raise ValueError(f"bad atom {(x, y)}")
            if p <= 0:
                raise ValueError(f"atom {(x, y)} has non-positive mass {p}")
            if (x, y) in merged:
                raise ValueError(f"duplicate atom {(x, y)}")
            merged[(int(x), int(y))] = p
        if sum(merged.values()) != 1:
            raise ValueError(f"masses sum to {sum(merged.values())}, not 1")
        object.__setattr__(self, "atoms", tuple(sorted(merged.items())))

    @classmethod
    def from_json(cls, obj) -> "FiniteDistribution":
        if isinstance(obj, str):
            obj = json.loads(obj)
        atoms = obj["atoms"]
        if not isinstance(atoms, list):
            raise ValueError("'atoms' must be a list")
        out = []
        for item in atoms:
            (x, y), p = item
            out.append(((int(x), int(y)), Fraction(p)))
        return cls(tuple(out))

    def to_json(self) -> dict:
        return {"atoms": [[[x, y], str(p)] for (x, y), p in self.atoms]}

    def mass(self, x: int, y: int) -> Fraction:
        return dict(self.atoms).get((x, y), Fraction(0))

    @property
    def points(self) -> tuple[int, ...]:
        return tuple(sorted({x for (x, _), _ in self.atoms}))


@dataclass(frozen=True)
class TrialReport:
    trials: int
    successes: int
    threshold: Fraction
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def frequency(self) -> Fraction:
        return Fraction(self.successes, self.trials)

    @property
    def margin(self) -> float:
        """Three binomial standard deviations at the threshold probability."""
        p = float(self.threshold)
        return 3 * math.sqrt(p * (1 - p) / self.trials)

    @property
    def passed(self) -> bool:
        return float(self.frequency) >= float(self.threshold) - self.margin

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "successes": self.successes,
            "frequency": str(self.frequency),
            "threshold": str(self.threshold),
            "margin": round(self.margin, 12),
            "pass": self.passed,
            **self.extra,
        }


def true_loss(D: FiniteDistribution, h: Optional[Hypothesis]) -> Fraction:
    """Exact loss; an undefined output (``None``) has loss 1."""
    if h is None:
        return Fraction(1)
    return sum((p for (x, y), p in D.atoms if h(x) != y), Fraction(0))


def uniform_on_sample(S: LabeledSample) -> FiniteDistribution:
    counts: dict[tuple[int, int], int] = {}
    for pr in S.pairs:
        counts[pr] = counts.get(pr, 0) + 1
    return FiniteDistribution(tuple((pr, Fraction(c, len(S))) for pr, c in counts.items()))


def realizes_sample(cls: EnumeratedClass, S: LabeledSample) -> bool:
    return cls.realizes(S)


def is_realizable(D: FiniteDistribution, cls: EnumeratedClass) -> bool:
    return cls.realizes(LabeledSample(tuple(pr for pr, _ in D.atoms)))


def inf_loss(D: FiniteDistribution, cls: EnumeratedClass) -> Fraction:
    """``min_h L_D(h)`` over the class, by trying every labeling of the support."""
    pts = D.points
    if len(pts) > MAX_INF_POINTS:
        raise ValueError(f"more than {MAX_INF_POINTS} support points")
    best = None
    for ys in itertools.product((0, 1), repeat=len(pts)):
        S = LabeledSample(tuple(zip(pts, ys)))
        if not cls.realizes(S):
            continue
        loss = sum((D.mass(x, 1 - y) for x, y in S.pairs), Fraction(0))
        if best is None or loss < best:
            best = loss
    if best is None:
        raise ValueError("no labeling of the support is realized")
    return best


def _sampler(D: FiniteDistribution):
    denom = math.lcm(*(p.denominator for _, p in D.atoms))
    cum = np.cumsum([int(p * denom) for _, p in D.atoms], dtype=object)
    pairs = [pr for pr, _ in D.atoms]
    exact = denom < 2**62
    cum_arr = np.array(cum, dtype=np.int64 if exact else float)

    def draw(m: int, seed: int) -> LabeledSample:
        rng = np.random.Generator(np.random.PCG64(seed))
        if exact:
            u = rng.integers(0, denom, size=m)
        else:
            u = rng.random(size=m) * float(denom)
        idx = np.searchsorted(cum_arr, u, side="right")
        return LabeledSample(tuple(pairs[i] for i in idx))

    return draw


def sample_iid(D: FiniteDistribution, m: int, seed: int) -> LabeledSample:
    if m < 1:
        raise ValueError("m must be at least 1")
    return _sampler(D)(m, seed)


def _count(trial: Callable[[int], bool], trials: int, jobs: int) -> int:
    if jobs <= 1:
        return sum(map(trial, range(trials)))
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return sum(pool.map(trial, range(trials)))


def pac_trial_suite(
    learner: Learner,
    cls: EnumeratedClass,
    D: FiniteDistribution,
    a: int,
    b: int,
    m: int,
    trials: int,
    seed: int,
    jobs: int = 1,
) -> TrialReport:
    """Frequency of ``L_D(A(S)) <= inf_H L_D + 1/a`` over ``S ~ D^m``."""
    target = inf_loss(D, cls) + Fraction(1, a)
    draw = _sampler(D)

    def trial(i):
        return true_loss(D, learner(draw(m, mix64(seed, i)))) <= target

    return TrialReport(trials, _count(trial, trials, jobs), 1 - Fraction(1, b), {"m": m})


def nonuniform_trial_suite(
    cls: EnumeratedClass,
    D: FiniteDistribution,
    a: int,
    b: int,
    target_h_index: int,
    trials: int,
    seed: int,
    jobs: int = 1,
) -> TrialReport:
    """Run the nonuniform learner at ``m = m_nu(a, b, n_h)`` against ``h = cls[n_h]``."""
    m = m_nu(a, b, target_h_index)
    target = true_loss(D, cls.enumerate(target_h_index)) + Fraction(1, a)
    draw = _sampler(D)

    def trial(i):
        return true_loss(D, nonuniform_learner(cls, draw(m, mix64(seed, i)))) <= target

    return TrialReport(trials, _count(trial, trials, jobs), 1 - Fraction(1, b), {"m": m})


def hoeffding_check(
    h: Hypothesis,
    D: FiniteDistribution,
    m: int,
    b: int,
    trials: int,
    seed: int,
    jobs: int = 1,
) -> TrialReport:
    """Frequency of ``|L_D(h) - L_S(h)| <= sqrt(b / 2m)``, compared exactly."""
    loss = true_loss(D, h)
    eps2 = epsilon_squared(m, b)
    draw = _sampler(D)

    def trial(i):
        dev = loss - empirical_loss(draw(m, mix64(seed, i)), h)
        return dev * dev <= eps2

    return TrialReport(trials, _count(trial, trials, jobs), 1 - Fraction(1, b), {"m": m})


def deviation_probability(h: Hypothesis, D: FiniteDistribution, m: int, b: int) -> Fraction:
    """Exact ``Pr[|L_D(h) - L_S(h)| <= sqrt(b / 2m)]``; errors are Bernoulli(L_D(h))."""
    p = true_loss(D, h)
    eps2 = epsilon_squared(m, b)
    total = Fraction(0)
    for k in range(m + 1):
        dev = p - Fraction(k, m)
        if dev * dev <= eps2:
            total += math.comb(m, k) * p**k * (1 - p) ** (m - k)
    return total


def make_learner(name: str, cls: EnumeratedClass, b: Optional[int] = None) -> Learner:
    if name == "erm_hfin":
        return erm_hfin
    if name == "erm":
        return lambda S: erm_enumerated(cls, S)
    if name == "srm":
        if b is None:
            raise ValueError("the srm learner needs b")
        return lambda S: srm(cls, b, S)[0]
    if name == "nonuniform":
        return lambda S: nonuniform_learner(cls, S)
    raise ValueError(f"unknown learner {name!r}")


@dataclass(frozen=True)
class CurveConfig:
    learner: str
    class_spec: dict
    distribution: FiniteDistribution
    a: int
    b: int
    grid: Sequence[int]
    trials: int
    seed: int = 0
    srm_b: Optional[int] = None

    @classmethod
    def from_json(cls, obj) -> "CurveConfig":
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            cfg = cls(
                learner=obj["learner"],
                class_spec=obj.get("class", {"kind": "hfin"}),
                distribution=FiniteDistribution.from_json(obj["distribution"]),
                a=int(obj["a"]),
                b=int(obj["b"]),
                grid=tuple(int(m) for m in obj["grid"]),
                trials=int(obj["trials"]),
                seed=int(obj.get("seed", 0)),
                srm_b=obj.get("srm_b"),
            )
        except KeyError as exc:
            raise ValueError(f"curve config is missing {exc.args[0]!r}") from None
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.a < 1 or self.b < 1:
            raise ValueError("a and b must be at least 1")
        if not self.grid or any(m < 1 for m in self.grid):
            raise ValueError("grid must be a nonempty list of sample sizes >= 1")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")


def experiment_curve(config: CurveConfig, jobs: int = 1) -> list[dict]:
    """One PAC trial suite per grid size; rows ``m, freq, threshold, pass``."""
    config.validate()
    cls = class_from_spec(config.class_spec)
    learner = make_learner(config.learner, cls, config.srm_b)
    rows = []
    for m in config.grid:
        rep = pac_trial_suite(learner, cls, config.distribution, config.a, config.b, m, config.trials, config.seed, jobs)
        rows.append({"m": m, "freq": rep.frequency, "threshold": rep.threshold, "pass": rep.passed})
    return rows

