import json

import numpy as np
import pytest

from ewensinv import formulas
from ewensinv import montecarlo as mc
from ewensinv.permcore import inversion_counts_rows
from ewensinv.sampler import EwensParams, RandomSeed

SAMPLES = 100_000


def test_moments_merge_matches_direct():
    rng = np.random.default_rng(0)
    x = rng.normal(3.0, 2.0, 10_001)
    parts = np.array_split(x, [7, 300, 5000])
    acc = mc.Moments()
    for p in parts:
        acc = acc.merge(mc.Moments.of(p))
    direct = mc.Moments.of(x)
    assert acc.count == direct.count
    assert acc.mean == pytest.approx(direct.mean, rel=1e-13)
    assert acc.variance == pytest.approx(x.var(ddof=1), rel=1e-12)
    assert mc.Moments().merge(direct) == direct


def test_sample_count_validation():
    with pytest.raises(ValueError, match="samples must be >= 2"):
        mc.estimate_expected_inversions(EwensParams(5, 1.0), 1, RandomSeed())
    with pytest.raises(ValueError):
        mc.estimate_pair_probability(EwensParams(5, 1.0), 3, 2, 100, RandomSeed())
    with pytest.raises(ValueError):
        mc.estimate_cycle_length_counts(EwensParams(5, 1.0), 6, 100, RandomSeed())


def test_expected_inversions_uniform():
    est = mc.estimate_expected_inversions(EwensParams(50, 1.0), SAMPLES, RandomSeed(1))
    assert abs(est.z(612.5)) < 4


def test_expected_inversions_cyclic():
    est = mc.estimate_expected_inversions(EwensParams(20, 0.0), SAMPLES, RandomSeed(2))
    assert abs(est.z(20 * 59 / 12)) < 4


def test_expected_inversions_theta_two():
    params = EwensParams(50, 2.0)
    est = mc.estimate_expected_inversions(params, SAMPLES, RandomSeed(3))
    assert abs(est.z(mc.expected_inversions_target(params))) < 4


@pytest.mark.parametrize(
    "n, theta, i, j, target",
    [(9, 1.0, 2, 7, 0.5), (5, 0.0, 1, 4, 2 / 3), (4, 2.0, 1, 3, 0.4)],
)
def test_pair_probability(n, theta, i, j, target):
    est = mc.estimate_pair_probability(EwensParams(n, theta), i, j, SAMPLES, RandomSeed(4))
    assert abs(est.z(target)) < 4
    # binomial standard error
    assert est.std_error == pytest.approx(np.sqrt(est.mean * (1 - est.mean) / SAMPLES), rel=1e-3)


@pytest.mark.parametrize("m", [1, 3])
def test_cycle_counts_poisson(m):
    cmp = mc.estimate_cycle_length_counts(EwensParams(500, 1.5), m, 50_000, RandomSeed(5))
    assert cmp.target == 1.5 / m
    assert cmp.accepted()


def test_cycle_counts_theta_zero():
    cmp = mc.estimate_cycle_length_counts(EwensParams(12, 0.0), 12, 1000, RandomSeed(6))
    assert cmp.empirical_mean == 1
    assert cmp.empirical_variance == 0
    assert cmp.target == 0


def test_fixed_points():
    assert mc.estimate_fixed_points(EwensParams(9, 0.0), 1000, RandomSeed(7)).mean == 0
    est = mc.estimate_fixed_points(EwensParams(50, 1.0), SAMPLES, RandomSeed(7))
    assert abs(est.z(1.0)) < 4
    params = EwensParams(50, 2.0)
    est = mc.estimate_fixed_points(params, SAMPLES, RandomSeed(7))
    assert abs(est.z(formulas.expected_fixed_points(50, 2.0))) < 4


def test_reproducible_bit_exact():
    params = EwensParams(30, 0.7)
    a = mc.estimate_expected_inversions(params, 20_000, RandomSeed(8, 2))
    b = mc.estimate_expected_inversions(params, 20_000, RandomSeed(8, 2))
    assert a == b
    c = mc.estimate_expected_inversions(params, 20_000, RandomSeed(8, 3))
    assert c.mean != a.mean


def test_independent_of_worker_count(monkeypatch):
    params = EwensParams(25, 1.3)
    stats = {"inv": inversion_counts_rows, "pair": mc.pair_statistic(2, 9)}
    one = mc.estimate_statistics(params, 30_000, RandomSeed(9), stats, workers=1)
    four = mc.estimate_statistics(params, 30_000, RandomSeed(9), stats, workers=4)
    assert one == four
    monkeypatch.setenv("EWENS_THREADS", "3")
    assert mc.worker_count() == 3
    assert mc.estimate_statistics(params, 30_000, RandomSeed(9), stats) == one
    monkeypatch.setenv("EWENS_THREADS", "x")
    with pytest.raises(ValueError):
        mc.worker_count()


@pytest.mark.slow
def test_calibration():
    params = EwensParams(20, 1.0)
    target = mc.expected_inversions_target(params)
    zs = [mc.estimate_expected_inversions(params, 2000, RandomSeed(1000 + s)).z(target) for s in range(100)]
    assert sum(abs(z) > 3 for z in zs) <= 3


def test_report_record_is_json():
    params = EwensParams(10, 1.0)
    est = mc.estimate_expected_inversions(params, 1000, RandomSeed(10))
    rec = mc.report_record("inversions", est, 22.5, params, RandomSeed(10))
    text = json.dumps(rec)
    back = json.loads(text)
    assert set(back) >= {"target", "mean", "std_error", "z", "samples", "seed", "params"}
    assert back["samples"] == 1000
    assert back["params"] == {"n": 10, "theta": 1.0}
