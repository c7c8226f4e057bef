"""Kolmogorov-Smirnov tests and Monte Carlo confidence intervals.

p-values are asymptotic (Kolmogorov distribution); every experiment here
uses samples of at least a few thousand points.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Optional

import numpy as np
from scipy import special, stats

from .exceptions import EmptySample, InsufficientSamples


@dataclass(frozen=True)
class EstimateWithCI:
    mean: float
    half_width: float
    level: float
    n: int
    seed: Optional[int] = None

    def __post_init__(self):
        if self.half_width < 0:
            raise ValueError("half_width must be non-negative")
        if self.n < 1:
            raise ValueError("n must be positive")

    @property
    def sigma(self) -> float:
        """Standard error implied by the half-width and level."""
        z = normal_multiplier(self.level)
        return self.half_width / z if z > 0 else 0.0

    def contains(self, value, rel_floor=0.0) -> bool:
        tol = max(self.half_width, rel_floor * abs(value))
        return abs(self.mean - value) <= tol

    def to_dict(self):
        return asdict(self)


def kolmogorov_sf(x):
    """P(K > x) for the limiting Kolmogorov distribution."""
    return special.kolmogorov(x)


def ecdf(samples):
    """Sorted sample and the right-continuous ECDF evaluator."""
    xs = np.sort(np.asarray(samples, dtype=float).ravel())
    n = xs.size

    def F(x):
        return np.searchsorted(xs, x, side="right") / n

    return xs, F


def ks_one_sample(samples, cdf: Callable):
    xs = np.sort(np.asarray(samples, dtype=float).ravel())
    n = xs.size
    if n == 0:
        raise EmptySample("one-sample KS needs at least one observation")
    f = np.clip(np.asarray(cdf(xs), dtype=float), 0.0, 1.0)
    i = np.arange(1, n + 1)
    d = max(np.max(i / n - f), np.max(f - (i - 1) / n))
    d = float(min(max(d, 0.0), 1.0))
    return d, float(kolmogorov_sf(math.sqrt(n) * d))


def ks_two_sample(a, b):
    a = np.sort(np.asarray(a, dtype=float).ravel())
    b = np.sort(np.asarray(b, dtype=float).ravel())
    if a.size == 0 or b.size == 0:
        raise EmptySample("two-sample KS needs two non-empty samples")
    pooled = np.concatenate([a, b])
    fa = np.searchsorted(a, pooled, side="right") / a.size
    fb = np.searchsorted(b, pooled, side="right") / b.size
    d = float(np.max(np.abs(fa - fb)))
    n_eff = a.size * b.size / (a.size + b.size)
    return d, float(kolmogorov_sf(math.sqrt(n_eff) * d))


def normal_multiplier(level):
    return float(stats.norm.ppf(0.5 + level / 2.0))


def mc_mean_ci(samples, level=0.9973, seed=None) -> EstimateWithCI:
    x = np.asarray(samples, dtype=float).ravel()
    if x.size < 2:
        raise InsufficientSamples("a confidence interval needs at least two samples")
    if not 0.0 < level < 1.0:
        raise ValueError("level must lie in (0, 1)")
    se = float(np.std(x, ddof=1)) / math.sqrt(x.size)
    return EstimateWithCI(float(np.mean(x)), normal_multiplier(level) * se, level, int(x.size), seed)


def proportion_ci(successes, n, level=0.9973, seed=None) -> EstimateWithCI:
    """Normal-approximation interval for a binomial proportion."""
    if n < 2:
        raise InsufficientSamples("a confidence interval needs at least two samples")
    p = successes / n
    se = math.sqrt(max(p * (1.0 - p), 0.0) / n)
    return EstimateWithCI(float(p), normal_multiplier(level) * se, level, int(n), seed)
