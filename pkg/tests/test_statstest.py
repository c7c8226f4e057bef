import numpy as np
import pytest
from scipy import stats

from invsub.exceptions import EmptySample, InsufficientSamples
from invsub.statstest import (
    EstimateWithCI,
    ecdf,
    ks_one_sample,
    ks_two_sample,
    mc_mean_ci,
    normal_multiplier,
    proportion_ci,
)


def test_ks_one_sample_matches_scipy_statistic():
    x = np.random.default_rng(0).normal(size=3000)
    d, p = ks_one_sample(x, stats.norm.cdf)
    ref = stats.kstest(x, "norm")
    assert d == pytest.approx(ref.statistic, rel=1e-12)
    assert p == pytest.approx(ref.pvalue, abs=0.02)


def test_ks_two_sample_matches_scipy_statistic():
    g = np.random.default_rng(1)
    a, b = g.normal(size=2000), g.normal(0.2, size=2500)
    d, p = ks_two_sample(a, b)
    assert d == pytest.approx(stats.ks_2samp(a, b).statistic, rel=1e-12)
    assert p < 1e-6


def test_ks_empty():
    with pytest.raises(EmptySample):
        ks_two_sample([], [1.0])
    with pytest.raises(EmptySample):
        ks_one_sample([], stats.norm.cdf)


def test_ecdf_right_continuous():
    _, F = ecdf([1.0, 2.0, 2.0])
    assert F(2.0) == 1.0
    assert F(1.999) == pytest.approx(1 / 3)


def test_mean_ci_and_sigma():
    est = mc_mean_ci(np.arange(10.0), level=0.9973)
    assert est.mean == 4.5
    assert est.sigma == pytest.approx(np.std(np.arange(10.0), ddof=1) / np.sqrt(10))
    assert normal_multiplier(0.9973) == pytest.approx(3.0, abs=1e-3)
    with pytest.raises(InsufficientSamples):
        mc_mean_ci([1.0])


def test_mean_ci_coverage():
    g = np.random.default_rng(2)
    hits = sum(mc_mean_ci(g.exponential(size=200), level=0.9).contains(1.0) for _ in range(400))
    assert 0.84 <= hits / 400 <= 0.96


def test_proportion_ci():
    est = proportion_ci(30, 100)
    assert est.mean == 0.3
    assert est.sigma == pytest.approx(np.sqrt(0.21 / 100))
    assert est.contains(0.3)
    with pytest.raises(ValueError):
        EstimateWithCI(0.0, -1.0, 0.9, 10)
