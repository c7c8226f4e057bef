"""Mittag-Leffler function on the negative real axis.

``ml_neg(beta, z)`` returns E_beta(-z) = sum_n (-z)^n / Gamma(1 + n beta), which
is also the Laplace transform E exp(-s E(t)) of an inverse stable subordinator
at ``z = s t**beta``.

Three branches are used:

* small z: the power series, summed with ``math.fsum`` and an explicit
  geometric remainder bound;
* intermediate z: the real integral representation

      E_beta(-x) = sin(beta pi) / (pi beta x)
                   * int_0^inf exp(-v**(1/beta)) / ((v/x)**2 + 2 cos(beta pi) v/x + 1) dv

  (the usual spectral form after the substitution ``u = v**(1/beta)``),
  integrated with adaptive Gauss-Kronrod quadrature;
* large z: the algebraic asymptotic expansion
  ``-sum_{j>=1} (-z)**(-j) / Gamma(1 - j beta)``, which has no exponentially
  small corrections on the negative axis for beta < 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import gamma as _gamma
from scipy.special import rgamma

from .exceptions import DomainError, NoConvergence


@dataclass(frozen=True)
class MLConfig:
    series_crossover: float = 1.0
    tolerance: float = 1e-13
    max_terms: int = 150
    asymptotic_from: float = 100.0
    asymptotic_terms: int = 40

    def __post_init__(self):
        if not 0.0 < self.tolerance < 1.0:
            raise ValueError("tolerance must lie in (0, 1)")
        if not self.series_crossover > 0.0:
            raise ValueError("series_crossover must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be positive")


DEFAULT_CONFIG = MLConfig()


def _check_beta(beta, allow_one=True):
    beta = float(beta)
    upper_ok = beta <= 1.0 if allow_one else beta < 1.0
    if not (0.0 < beta and upper_ok):
        raise DomainError(f"beta={beta} outside the supported range")
    return beta


def ml_series(beta, z, cfg=DEFAULT_CONFIG):
    """Truncated power series with remainder control; raises NoConvergence."""
    terms = []
    for n in range(cfg.max_terms + 1):
        arg = 1.0 + n * beta
        term = (-z) ** n * rgamma(arg) if arg < 171.0 else 0.0
        terms.append(term)
        if n < 2:
            continue
        # Once the term ratio is below one and decreasing, the tail is
        # dominated by a geometric series with that ratio.
        ratio = z * math.exp(math.lgamma(arg) - math.lgamma(arg + beta))
        prev = z * math.exp(math.lgamma(arg - beta) - math.lgamma(arg))
        if ratio < 1.0 and ratio <= prev:
            tail = abs(term) * ratio / (1.0 - ratio)
            total = math.fsum(terms)
            if tail <= cfg.tolerance * abs(total) * 1e-2:
                return total
    raise NoConvergence(f"series for E_{beta}(-{z}) did not converge in {cfg.max_terms} terms")


def ml_integral(beta, x):
    """E_beta(-x) for x > 0 through the real integral representation."""
    c = math.cos(beta * math.pi)
    inv_beta = 1.0 / beta

    def f(v):
        w = v / x
        return math.exp(-(v**inv_beta)) / (w * w + 2.0 * c * w + 1.0)

    # exp(-v**(1/beta)) < 1e-30 beyond v = 70**beta; the peak of the
    # denominator sits at v = x.
    cut = 70.0**beta
    breaks = [0.0, x, cut] if x < cut else [0.0, cut]
    val = 0.0
    for a, b in zip(breaks[:-1], breaks[1:]):
        val += integrate.quad(f, a, b, epsabs=0.0, epsrel=1e-13, limit=200)[0]
    return math.sin(beta * math.pi) / (math.pi * beta * x) * val


def ml_asymptotic(beta, z, n_terms=40):
    """Algebraic expansion, accurate for large z; vectorized in z."""
    z = np.asarray(z, dtype=float)
    j = np.arange(1, n_terms + 1)
    coef = rgamma(1.0 - j * beta)
    inv = 1.0 / z[..., None]
    powers = (-inv) ** j
    terms = powers * coef
    # The expansion diverges eventually; truncate at the smallest nonzero term.
    mags = np.where(coef == 0.0, np.nan, np.abs(terms))
    cut = np.nanargmin(mags, axis=-1)
    mask = j <= (cut + 1)[..., None]
    return -np.sum(np.where(mask, terms, 0.0), axis=-1)


def series_crossover(beta, cfg: MLConfig = DEFAULT_CONFIG):
    """Effective switch point z*: capped so the series converges on [0, 2 z*]."""
    n = cfg.max_terms
    # z**n / Gamma(1 + n beta) below tolerance * 1e-3 at the last allowed term.
    z_max = math.exp((math.lgamma(1.0 + n * beta) + math.log(cfg.tolerance * 1e-3)) / n)
    return min(cfg.series_crossover, 0.5 * z_max)


def _ml_scalar(beta, z, cfg):
    if z == 0.0:
        return 1.0
    if beta == 1.0:
        return math.exp(-z)
    if z >= cfg.asymptotic_from:
        return float(ml_asymptotic(beta, z, cfg.asymptotic_terms))
    if z <= series_crossover(beta, cfg):
        try:
            return ml_series(beta, z, cfg)
        except NoConvergence:
            pass
    return ml_integral(beta, z)


def ml_neg(beta, z, cfg: MLConfig = DEFAULT_CONFIG):
    """E_beta(-z) for 0 < beta <= 1 and z >= 0 (scalar or array z)."""
    beta = _check_beta(beta)
    z_arr = np.asarray(z, dtype=float)
    if np.any(z_arr < 0) or np.any(np.isnan(z_arr)):
        raise DomainError("z must be non-negative")
    if z_arr.ndim == 0:
        return _ml_scalar(beta, float(z_arr), cfg)
    out = np.empty_like(z_arr)
    flat = z_arr.ravel()
    res = out.ravel()
    big = flat >= cfg.asymptotic_from
    if beta < 1.0 and big.any():
        res[big] = ml_asymptotic(beta, flat[big], cfg.asymptotic_terms)
    for i in np.flatnonzero(~big if beta < 1.0 else np.ones_like(big)):
        res[i] = _ml_scalar(beta, float(flat[i]), cfg)
    return out


def ml_tail_constant(beta):
    """c with E_beta(-z) ~ c / z: Gamma(beta) sin(beta pi) / pi = 1 / Gamma(1 - beta)."""
    beta = _check_beta(beta, allow_one=False)
    return float(_gamma(beta) * math.sin(beta * math.pi) / math.pi)


def laplace_E(beta, s, t, cfg: MLConfig = DEFAULT_CONFIG):
    """E exp(-s E(t)) for the inverse of a subordinator with exponent s**beta."""
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(s < 0) or np.any(t < 0):
        raise DomainError("s and t must be non-negative")
    return ml_neg(beta, s * t**beta, cfg)


def crossover_agreement(beta, cfg: MLConfig = DEFAULT_CONFIG, n=9):
    """Largest relative gap between series and integral on [z*/2, 2 z*]."""
    z_star = series_crossover(beta, cfg)
    zs = np.geomspace(z_star / 2.0, z_star * 2.0, n)
    worst = 0.0
    for z in zs:
        a = ml_series(beta, float(z), cfg)
        b = ml_integral(beta, float(z))
        worst = max(worst, abs(a - b) / abs(b))
    return worst
