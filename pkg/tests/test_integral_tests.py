import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from integral_catalog import CATALOG, MU, PARAMS
from invsub.exceptions import DomainError
from invsub.integral_tests import (
    Basis,
    Constant,
    Custom,
    LogLogPlusLogLogLog,
    LogLogPower,
    NumericRule,
    Outcome,
    PowerOverLogPower,
    PurePower,
    Verdict,
    breiman_integrand,
    classify,
    classify_kolmogorov,
    consistency_check,
    hirsch_integrand,
    kolmogorov_integrand,
    make_family,
    natural_exponent,
    numeric_classify,
)


def test_verdict_rejects_inconclusive_analytic():
    with pytest.raises(ValueError):
        Verdict(Outcome.INCONCLUSIVE, Basis.ANALYTIC, {})


@pytest.mark.parametrize("which,fam,expected,reason", CATALOG)
def test_catalog_analytic(which, fam, expected, reason):
    alpha, beta, chi = PARAMS
    v = classify(which, fam, alpha, beta, chi, method="analytic")
    assert v.basis is Basis.ANALYTIC
    assert v.outcome.value == expected, reason


@pytest.mark.parametrize("which,fam,expected,reason", CATALOG)
def test_catalog_numeric(which, fam, expected, reason):
    alpha, beta, chi = PARAMS
    v = classify(which, fam, alpha, beta, chi, method="numeric")
    assert v.basis is Basis.NUMERIC
    assert v.outcome.value == expected, reason


@pytest.mark.parametrize("params", [(1.5, 0.3, 1.0), (1.8, 0.9, 0.5)])
def test_numeric_agrees_with_analytic_elsewhere(params):
    alpha, beta, chi = params
    mu = classify_kolmogorov(Constant(1.0), alpha, beta, chi).diagnostics["mu"]
    cases = [
        ("kolmogorov", LogLogPower(1.2 / mu)),
        ("kolmogorov", LogLogPower(0.8 / mu)),
        ("kolmogorov", LogLogPlusLogLogLog(1 / mu, 3.0 / mu)),
        ("breiman", LogLogPower(1.3 / mu)),
        ("breiman", LogLogPower(0.7 / mu)),
        ("hirsch", PowerOverLogPower(beta / alpha, 0.5)),
        ("hirsch", PowerOverLogPower(beta / alpha, 1.5)),
    ]
    for which, fam in cases:
        a = classify(which, fam, alpha, beta, chi, method="analytic")
        n = classify(which, fam, alpha, beta, chi, method="numeric")
        assert a.outcome == n.outcome, (which, fam)


def test_log_log_log_boundary():
    alpha, beta, chi = PARAMS
    # at a = 1/mu the log-log-log term decides: (log y)**(1/2 - mu b)/y
    assert classify_kolmogorov(LogLogPlusLogLogLog(1 / MU, 1.0 / MU), alpha, beta, chi).outcome is Outcome.DIVERGES
    assert classify_kolmogorov(LogLogPlusLogLogLog(1 / MU, 3.0 / MU), alpha, beta, chi).outcome is Outcome.CONVERGES


def test_small_time_reading():
    alpha, beta = 2.0, 0.5
    assert classify("hirsch", Constant(1.0), alpha, beta, small_time=True).outcome is Outcome.DIVERGES
    assert classify("hirsch", PurePower(0.5), alpha, beta, small_time=True).outcome is Outcome.CONVERGES


def test_custom_goes_numeric():
    alpha, beta, chi = PARAMS
    fam = Custom(lambda y: 0.75 * math.log(1.5 / MU * math.log(y)))
    v = classify_kolmogorov(fam, alpha, beta, chi)
    assert v.basis is Basis.NUMERIC
    assert v.outcome is Outcome.CONVERGES
    assert classify_kolmogorov(fam, alpha, beta, chi, method="analytic").outcome is Outcome.INCONCLUSIVE


def test_numeric_on_textbook_integrals():
    assert numeric_classify(lambda y: -2.0 * math.log(y)).outcome is Outcome.CONVERGES
    assert numeric_classify(lambda y: -math.log(y)).outcome is Outcome.DIVERGES
    assert numeric_classify(lambda y: -math.log(y) - 2.0 * math.log(math.log(y))).outcome is Outcome.CONVERGES


def test_integrands_are_positive_and_match_closed_form():
    mu, lam = MU, 1.0 / 3.0
    t = math.exp(math.e**2)
    f = LogLogPower(1.0, 1.0)
    val = kolmogorov_integrand(f, t, 2.0, 0.5, mu)
    ff = math.log(math.log(t))
    assert val == pytest.approx(ff ** (1 / 1.5) * math.exp(-mu * ff ** (2 / 1.5)) / t, rel=1e-12)
    assert breiman_integrand(f, t, mu, lam) == pytest.approx(ff ** (-lam / 2) * math.exp(-mu * ff**-lam) / t, rel=1e-12)
    assert hirsch_integrand(PurePower(0.0), 4.0, 2.0, 0.5) == pytest.approx(4.0**-1.25)
    with pytest.raises(DomainError):
        hirsch_integrand(PurePower(0.0), 1.0, 2.0, 0.5)


@settings(max_examples=30, deadline=None)
@given(a=st.floats(0.2, 3.0), da=st.floats(0.01, 1.0))
def test_kolmogorov_monotone_in_a(a, da):
    # a larger boundary can only help convergence
    alpha, beta, chi = PARAMS
    lo = classify_kolmogorov(LogLogPower(a / MU), alpha, beta, chi).outcome
    hi = classify_kolmogorov(LogLogPower((a + da) / MU), alpha, beta, chi).outcome
    assert not (lo is Outcome.CONVERGES and hi is Outcome.DIVERGES)


def test_make_family_and_natural_exponents():
    assert make_family("PurePower", [0.3]) == PurePower(0.3)
    with pytest.raises(ValueError):
        make_family("Nope", [])
    assert natural_exponent("kolmogorov", 2.0, 0.5) == 0.75
    assert natural_exponent("breiman", 2.0, 0.5) == pytest.approx(-3.0)
    with pytest.raises(DomainError):
        LogLogPower(0.0)
    with pytest.raises(ValueError):
        classify("nope", Constant(1.0), 2.0, 0.5)


def test_verdict_to_dict():
    d = classify_kolmogorov(Constant(1.0), *PARAMS).to_dict()
    assert d["outcome"] == "Diverges" and d["basis"] == "Analytic"


@pytest.mark.parametrize("alpha", [1.2, 1.5, 1.8, 2.0])
@pytest.mark.parametrize("beta", [0.1, 0.5, 0.9])
@pytest.mark.parametrize("chi", [0.5, 1.0, 2.0])
def test_consistency_check_sweep(alpha, beta, chi):
    r = consistency_check(alpha, beta, chi)
    assert r["passed"], r["mismatches"]


def test_consistency_reports_literal_constant_gap():
    r = consistency_check(2.0, 0.5, 2.0)
    assert r["literal_constant_mismatch"]
    assert r["notes"]


def test_numeric_rule_validation():
    with pytest.raises(ValueError):
        NumericRule(window=1)


@pytest.mark.parametrize("alpha", [1.1, 1.3, 1.7, 1.9])
@pytest.mark.parametrize("beta", [0.05, 0.2, 0.95])
def test_default_exponent_is_exactly_critical(alpha, beta):
    mu = classify_kolmogorov(Constant(1.0), alpha, beta).diagnostics["mu"]
    assert classify_kolmogorov(LogLogPower(1.001 / mu), alpha, beta).outcome is Outcome.CONVERGES
    assert classify_kolmogorov(LogLogPower(1.0 / mu), alpha, beta).outcome is Outcome.DIVERGES
