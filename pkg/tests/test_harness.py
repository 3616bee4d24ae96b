import math
import random
from fractions import Fraction as F

import pytest

from cpaclab.classes import class_hfin, class_singleton, class_support_at_most
from cpaclab.harness import (
    CurveConfig,
    FiniteDistribution,
    deviation_probability,
    experiment_curve,
    hoeffding_check,
    inf_loss,
    is_realizable,
    mix64,
    nonuniform_trial_suite,
    pac_trial_suite,
    realizes_sample,
    sample_iid,
    true_loss,
    uniform_on_sample,
)
from cpaclab.hypothesis import ZERO, Hypothesis, LabeledSample, empirical_loss
from cpaclab.learners import erm_enumerated, erm_hfin


def dist(*atoms):
    return FiniteDistribution(tuple(((x, y), F(p)) for (x, y), p in atoms))


POINT = dist(((3, 1), 1))
COIN = dist(((0, 1), "1/2"), ((1, 0), "1/2"))


def test_distribution_validation():
    with pytest.raises(ValueError):
        dist(((1, 1), "1/2"))
    with pytest.raises(ValueError):
        dist(((1, 1), "1/2"), ((1, 1), "1/2"))
    with pytest.raises(ValueError):
        dist(((1, 2), 1))
    with pytest.raises(ValueError):
        dist(((1, 1), "3/2"), ((2, 1), "-1/2"))


def test_distribution_json_round_trip(three_atom):
    assert FiniteDistribution.from_json(three_atom.to_json()) == three_atom
    assert three_atom.to_json()["atoms"][0] == [[3, 1], "1/2"]


def test_true_loss_examples():
    assert true_loss(POINT, Hypothesis((3,))) == 0
    assert true_loss(dist(((3, 1), "1/2"), ((5, 1), "1/2")), Hypothesis((3,))) == F(1, 2)
    assert true_loss(POINT, None) == 1


def test_true_loss_complement(three_atom):
    rng = random.Random(2)
    for _ in range(20):
        h = Hypothesis(tuple(x for x in (3, 5, 7) if rng.random() < 0.5))
        flip = Hypothesis(tuple(x for x in (3, 5, 7) if x not in h))
        assert true_loss(three_atom, h) + true_loss(three_atom, flip) == 1


def test_uniform_on_sample():
    assert uniform_on_sample(LabeledSample(((3, 1),))) == POINT
    two = uniform_on_sample(LabeledSample(((3, 1), (5, 0))))
    assert two.atoms == (((3, 1), F(1, 2)), ((5, 0), F(1, 2)))
    rng = random.Random(9)
    for _ in range(50):
        S = LabeledSample(tuple((rng.randrange(6), rng.randrange(2)) for _ in range(rng.randint(1, 8))))
        h = Hypothesis(tuple(x for x in range(6) if rng.random() < 0.5))
        assert true_loss(uniform_on_sample(S), h) == empirical_loss(S, h)


def test_realizability_examples():
    assert is_realizable(dist(((3, 1), "1/2"), ((5, 0), "1/2")), class_hfin())
    assert not is_realizable(dist(((3, 1), "1/2"), ((3, 0), "1/2")), class_hfin())
    assert not is_realizable(dist(((2, 1), "1/2"), ((4, 1), "1/2")), class_support_at_most(1))
    assert realizes_sample(class_support_at_most(1), LabeledSample(((2, 1), (4, 0))))


def test_inf_loss_hfin_closed_form():
    rng = random.Random(4)
    for _ in range(30):
        atoms = {}
        for x in rng.sample(range(6), rng.randint(1, 4)):
            for y in rng.sample((0, 1), rng.randint(1, 2)):
                atoms[(x, y)] = rng.randint(1, 5)
        total = sum(atoms.values())
        D = dist(*((k, F(v, total)) for k, v in atoms.items()))
        minority = sum(min(D.mass(x, 0), D.mass(x, 1)) for x in D.points)
        assert inf_loss(D, class_hfin()) == minority


def test_inf_loss_restricted_class():
    D = dist(((2, 1), "1/2"), ((4, 1), "1/3"), ((6, 0), "1/6"))
    assert inf_loss(D, class_support_at_most(1)) == F(1, 3)


def test_mix64_known_values():
    # SplitMix64 reference outputs for state 0: first two draws
    assert mix64(0, 0) == 0xE220A8397B1DCDAF
    assert mix64(0, 1) == 0x6E789E6AA1B965F4


def test_sample_iid_point_mass():
    for seed in (0, 1, 99):
        assert sample_iid(POINT, 5, seed).pairs == ((3, 1),) * 5


def test_sample_iid_frequency():
    D = dist(((3, 1), "1/2"), ((4, 0), "1/2"))
    S = sample_iid(D, 10**4, 42)
    assert abs(sum(p == (3, 1) for p in S.pairs) / 10**4 - 0.5) <= 0.02


def test_sample_iid_golden(three_atom):
    assert sample_iid(three_atom, 10, 0) == sample_iid(three_atom, 10, 0)
    assert sample_iid(three_atom, 10, 0).pairs == (
        (7, 1), (5, 0), (5, 0), (3, 1), (3, 1), (3, 1), (3, 1), (3, 1), (3, 1), (7, 1),
    )


def test_pac_perfect_learner():
    h = Hypothesis((3,))
    rep = pac_trial_suite(lambda S: erm_enumerated(class_singleton(h), S), class_singleton(h), POINT, 2, 2, 5, 50, 0)
    assert rep.frequency == 1 and rep.passed


def test_pac_constant_wrong_learner():
    rep = pac_trial_suite(lambda S: ZERO, class_hfin(), POINT, 2, 2, 5, 50, 0)
    assert rep.frequency == 0 and not rep.passed


def test_pac_undefined_output_counts_as_loss_one():
    rep = pac_trial_suite(lambda S: None, class_hfin(), POINT, 2, 2, 3, 20, 0)
    assert rep.successes == 0


def test_pac_first_passing_size(three_atom):
    # erm_hfin succeeds iff (3,1) is drawn: probability 1 - 2^-m
    first = next(m for m in range(1, 201) if pac_trial_suite(erm_hfin, class_hfin(), three_atom, 4, 4, m, 1000, 0).passed)
    assert first == 2
    assert 1 - F(1, 2**2) >= F(3, 4) > 1 - F(1, 2)


def test_pac_parallel_matches_serial(three_atom):
    a = pac_trial_suite(erm_hfin, class_hfin(), three_atom, 4, 4, 2, 1000, 0, jobs=1)
    b = pac_trial_suite(erm_hfin, class_hfin(), three_atom, 4, 4, 2, 1000, 0, jobs=4)
    assert a.successes == b.successes == 753


def test_report_margin():
    rep = pac_trial_suite(erm_hfin, class_hfin(), POINT, 2, 4, 1, 400, 0)
    assert rep.threshold == F(3, 4)
    assert rep.margin == pytest.approx(3 * math.sqrt(0.75 * 0.25 / 400))


def test_nonuniform_suite(three_atom):
    rep = nonuniform_trial_suite(class_hfin(), three_atom, 2, 2, 1, 200, 0)
    assert rep.extra["m"] == 128 and rep.passed
    assert nonuniform_trial_suite(class_hfin(), three_atom, 2, 2, 1, 200, 1).passed


def test_nonuniform_vacuous_with_a_one(three_atom):
    # with a = 1 the target L_D(h) + 1 bounds every loss, so every trial succeeds
    rep = nonuniform_trial_suite(class_hfin(), three_atom, 1, 1, 1, 20, 0)
    assert rep.extra["m"] == 4 and rep.frequency == 1


def test_hoeffding_point_mass():
    assert hoeffding_check(Hypothesis((3,)), POINT, 10, 1, 50, 0).frequency == 1


def test_deviation_probability_oracle():
    assert deviation_probability(ZERO, COIN, 8, 1) == F(238, 256)
    exact = sum(math.comb(8, k) for k in range(9) if (F(1, 2) - F(k, 8)) ** 2 <= F(1, 16))
    assert F(exact, 256) == F(238, 256)


def test_hoeffding_near_oracle():
    rep = hoeffding_check(ZERO, COIN, 8, 1, 2000, 0)
    p = float(deviation_probability(ZERO, COIN, 8, 1))
    assert abs(float(rep.frequency) - p) <= 3 * math.sqrt(p * (1 - p) / 2000)


def test_curve_rows(three_atom):
    cfg = CurveConfig("erm_hfin", {"kind": "hfin"}, three_atom, 4, 4, (2,), 300, 0)
    rows = experiment_curve(cfg)
    single = pac_trial_suite(erm_hfin, class_hfin(), three_atom, 4, 4, 2, 300, 0)
    assert rows == [{"m": 2, "freq": single.frequency, "threshold": F(3, 4), "pass": single.passed}]


def test_curve_monotone_sanity(three_atom):
    cfg = CurveConfig("erm_hfin", {"kind": "hfin"}, three_atom, 8, 4, (1, 10, 200), 500, 3)
    rows = experiment_curve(cfg)
    assert len(rows) == 3
    sigma = math.sqrt(0.25 / 500)
    assert rows[2]["freq"] >= rows[1]["freq"] - 6 * sigma


@pytest.mark.parametrize(
    "raw",
    [
        {"learner": "erm_hfin", "a": 1, "b": 1, "grid": [], "trials": 5, "distribution": {"atoms": [[[0, 0], "1"]]}},
        {"learner": "erm_hfin", "a": 0, "b": 1, "grid": [1], "trials": 5, "distribution": {"atoms": [[[0, 0], "1"]]}},
        {"learner": "erm_hfin", "a": 1, "b": 1, "grid": [1], "trials": 5},
    ],
)
def test_curve_config_errors(raw):
    with pytest.raises(ValueError):
        CurveConfig.from_json(raw)
