import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import erfcx

from invsub.exceptions import DomainError, NoConvergence
from invsub.pathsim import CompositionSpec
from invsub.smallball import (
    SmallBallSeriesConfig,
    alternating_cube_sum,
    chung_smallball_bm,
    mc_smallball,
    selfsimilar_envelope,
    smallball_Z_limit_constant,
    smallball_Z_series,
    within_tolerance,
)
from invsub.stable_core import StableParams, SubordinatorParams

BM = StableParams(2.0, 0.0, 2.0)


def erfcx_oracle(u, n_terms=20_000):
    # E_{1/2}(-x) = erfcx(x); independent of the package's ML evaluator.
    k = np.arange(1, n_terms + 1)
    odd = 2.0 * k - 1.0
    terms = np.where(k % 2 == 1, 1.0, -1.0) / odd * erfcx(odd**2 * math.pi**2 / (8 * u * u))
    return 4.0 / math.pi * math.fsum(terms)


def test_chung_known_values():
    # P(sup|B| <= 1) from the reflection-principle series, tabulated value.
    assert chung_smallball_bm(1.0) == pytest.approx(0.3708, abs=1e-4)
    assert chung_smallball_bm(100.0) == pytest.approx(1.0, abs=1e-12)


def test_beta_one_reduces_to_chung():
    for u in (0.3, 1.0, 2.5):
        assert smallball_Z_series(1.0, u) == chung_smallball_bm(u)


@pytest.mark.parametrize("u", [0.05, 0.2, 0.5, 1.0, 3.0])
def test_half_matches_erfcx_oracle(u):
    assert smallball_Z_series(0.5, u) == pytest.approx(erfcx_oracle(u), rel=1e-10)


def test_frozen_values():
    assert smallball_Z_series(0.5, 0.2) == pytest.approx(0.022555366, rel=1e-7)
    assert smallball_Z_series(0.5, 0.5) == pytest.approx(0.138227435, rel=1e-7)
    assert smallball_Z_series(0.5, 1.0) == pytest.approx(0.454699195, rel=1e-7)


@settings(max_examples=25, deadline=None)
@given(beta=st.floats(0.1, 0.95), u1=st.floats(0.05, 3.0), u2=st.floats(0.05, 3.0))
def test_series_is_a_monotone_probability(beta, u1, u2):
    lo, hi = sorted((u1, u2))
    p_lo, p_hi = smallball_Z_series(beta, lo), smallball_Z_series(beta, hi)
    assert 0.0 <= p_lo <= p_hi + 1e-12 <= 1.0 + 1e-12


def test_domain_errors():
    with pytest.raises(DomainError):
        smallball_Z_series(0.5, 0.0)
    with pytest.raises(DomainError):
        smallball_Z_series(1.5, 1.0)
    with pytest.raises(DomainError):
        smallball_Z_limit_constant(1.0)
    with pytest.raises(ValueError):
        SmallBallSeriesConfig(k_max=0)


def test_k_max_exhaustion_raises():
    with pytest.raises(NoConvergence):
        smallball_Z_series(0.5, 50.0, SmallBallSeriesConfig(k_max=3))


def test_cube_sum_and_limit_constant():
    assert abs(alternating_cube_sum() - math.pi**3 / 32) <= 1e-9
    for beta in (0.3, 0.5, 0.7):
        target = math.gamma(beta) * math.sin(beta * math.pi) / math.pi
        assert abs(smallball_Z_limit_constant(beta) - target) <= 1e-9


@pytest.mark.parametrize("beta", [0.3, 0.5, 0.7])
def test_small_u_power_law(beta):
    u = 0.02
    ratio = smallball_Z_series(beta, u) / u**2
    assert ratio == pytest.approx(smallball_Z_limit_constant(beta), rel=0.02)


def test_envelope_orders_and_slope():
    lo, hi = selfsimilar_envelope(0.5, 1.0, 0.2, 0.5, 0.1, 1.0, 1.0)
    assert 0 < lo < hi
    # the ML tail is 1/z, so the log-log slope of the bounds tends to 1/H
    us = np.array([1e-3, 1e-4])
    lows = [selfsimilar_envelope(0.5, 1.0, 0.2, 0.5, u, 1.0, 1.0)[0] for u in us]
    slope = np.diff(np.log(lows)) / np.diff(np.log(us))
    assert slope[0] == pytest.approx(2.0, rel=1e-3)
    with pytest.raises(DomainError):
        selfsimilar_envelope(1.0, 1.0, 0.2, 0.5, 0.1, 1.0, 1.0)


def test_mc_small_sanity_and_tolerance_helper():
    spec = CompositionSpec(BM, SubordinatorParams(0.5), 1.0, 2**8)
    mcs = mc_smallball(spec, [0.5, 1.0], 2000, seed=3, method="clock")
    for mc in mcs:
        target = smallball_Z_series(0.5, mc.u)
        assert abs(mc.estimate.mean - target) <= 4 * mc.estimate.sigma + 0.02 * target
    assert within_tolerance(mcs[1], mcs[1].estimate.mean)
    assert not within_tolerance(mcs[1], 0.5 * mcs[1].estimate.mean)
    one = mc_smallball(spec, 1.0, 500, seed=3, method="clock")
    assert one.u == 1.0
    assert one.to_dict()["method"] == "clock"


def test_mc_doubled_grid_never_raises_the_estimate():
    spec = CompositionSpec(BM, SubordinatorParams(0.5), 1.0, 2**6)
    for method in ("outer", "clock"):
        mc = mc_smallball(spec, 0.5, 1000, seed=4, method=method)
        assert mc.doubled.mean <= mc.estimate.mean
