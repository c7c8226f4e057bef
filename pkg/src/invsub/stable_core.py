"""Stable laws: parameter validation, characteristic function and exact samplers.

The driving process X is parametrized by ``(alpha, nu, chi)`` through

    E exp(i xi X(t)) = exp(-t |xi|^alpha (1 + i nu sgn(xi) tan(pi alpha / 2)) / chi)

which is the usual S1 form with skewness ``-nu`` and scale ``(t/chi)**(1/alpha)``.
``alpha = 2`` is Brownian motion with variance ``2 t / chi``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import IndexOutOfRange, NonpositiveScale, SkewOutOfRange
from .rng import as_generator


@dataclass(frozen=True)
class StableParams:
    alpha: float
    nu: float = 1.0
    chi: float = 1.0

    @property
    def is_gaussian(self) -> bool:
        return self.alpha == 2.0

    @property
    def is_spectrally_negative(self) -> bool:
        return 1.0 < self.alpha < 2.0 and self.nu == 1.0


@dataclass(frozen=True)
class SubordinatorParams:
    """Stable subordinator with Laplace exponent ``s -> scale_b * s**beta``."""

    beta: float
    scale_b: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.beta < 1.0:
            raise IndexOutOfRange(f"subordinator index beta={self.beta} not in (0, 1)")
        if not self.scale_b > 0.0:
            raise NonpositiveScale(f"scale_b={self.scale_b} must be positive")


def validate_params(alpha, nu=1.0, chi=1.0) -> StableParams:
    alpha, nu, chi = float(alpha), float(nu), float(chi)
    if not (0.0 < alpha <= 2.0) or alpha == 1.0:
        raise IndexOutOfRange(f"alpha={alpha} must lie in (0, 2] and differ from 1")
    if not -1.0 <= nu <= 1.0:
        raise SkewOutOfRange(f"nu={nu} must lie in [-1, 1]")
    if not chi > 0.0:
        raise NonpositiveScale(f"chi={chi} must be positive")
    return StableParams(alpha, nu, chi)


def validate_driver(params: StableParams) -> StableParams:
    """Drivers of Z must have 1 < alpha <= 2, and nu = 1 off the Gaussian case."""
    if not 1.0 < params.alpha <= 2.0:
        raise IndexOutOfRange(f"driver index alpha={params.alpha} must lie in (1, 2]")
    if params.alpha < 2.0 and params.nu != 1.0:
        raise SkewOutOfRange("a non-Gaussian driver must be spectrally negative (nu = 1)")
    return params


def standard_form(params: StableParams, t=1.0):
    """Map ``(alpha, nu, chi)`` at time ``t`` to S1 ``(index, skewness, scale)``."""
    return params.alpha, -params.nu, (t / params.chi) ** (1.0 / params.alpha)


def char_function(params: StableParams, t, xi):
    xi = np.asarray(xi, dtype=float)
    t = np.asarray(t, dtype=float)
    if params.is_gaussian:
        skew_term = 0.0
    else:
        skew_term = params.nu * np.sign(xi) * math.tan(math.pi * params.alpha / 2.0)
    expo = -t * np.abs(xi) ** params.alpha * (1.0 + 1j * skew_term) / params.chi
    out = np.exp(expo)
    return out[()] if out.ndim == 0 else out


def _out_shape(arr, size):
    if size is None:
        return arr.shape
    return np.broadcast_shapes(arr.shape, tuple(np.atleast_1d(size)))


def _cms_standard(alpha, skew, size, gen):
    # Chambers-Mallows-Stuck, S1 parametrization, unit scale, alpha != 1.
    v = gen.uniform(-math.pi / 2.0, math.pi / 2.0, size)
    w = gen.standard_exponential(size)
    zeta = -skew * math.tan(math.pi * alpha / 2.0)
    xi = math.atan(-zeta) / alpha
    a = alpha * (v + xi)
    return (
        (1.0 + zeta * zeta) ** (1.0 / (2.0 * alpha))
        * np.sin(a)
        / np.cos(v) ** (1.0 / alpha)
        * (np.cos(v - a) / w) ** ((1.0 - alpha) / alpha)
    )


def sample_stable(params: StableParams, t, rng, size=None):
    """Draw X(t).  ``t`` may be an array broadcasting against ``size``."""
    gen = as_generator(rng)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be non-negative")
    shape = _out_shape(t, size)
    if params.is_gaussian:
        z = gen.standard_normal(shape)
        out = z * np.sqrt(2.0 * t / params.chi)
    else:
        alpha, skew, _ = standard_form(params)
        out = _cms_standard(alpha, skew, shape, gen) * (t / params.chi) ** (1.0 / alpha)
    out = np.where(t == 0.0, 0.0, out)
    return out[()] if out.ndim == 0 else out


def _kanter_unit(beta, size, gen):
    # Positive stable variate with E exp(-s S) = exp(-s**beta).
    u = 1.0 - gen.random(size)
    w = gen.standard_exponential(size)
    pu = math.pi * u
    a = (np.sin(beta * pu) / np.sin(pu)) ** (1.0 / (1.0 - beta)) * np.sin((1.0 - beta) * pu) / np.sin(beta * pu)
    return (a / w) ** ((1.0 - beta) / beta)


def sample_positive_stable(beta, rng, size=None):
    """Unit one-sided stable variate, Laplace transform ``exp(-s**beta)``."""
    if not 0.0 < beta < 1.0:
        raise IndexOutOfRange(f"beta={beta} not in (0, 1)")
    out = _kanter_unit(float(beta), size, as_generator(rng))
    return out[()] if np.ndim(out) == 0 else out


def sample_subordinator_increment(params: SubordinatorParams, dt, rng, size=None):
    """Increment over a time step ``dt``: Laplace transform ``exp(-dt*b*s**beta)``."""
    gen = as_generator(rng)
    dt = np.asarray(dt, dtype=float)
    if np.any(dt < 0):
        raise ValueError("dt must be non-negative")
    shape = _out_shape(dt, size)
    unit = _kanter_unit(params.beta, shape, gen)
    out = unit * (dt * params.scale_b) ** (1.0 / params.beta)
    out = np.where(dt == 0.0, 0.0, out)
    return out[()] if out.ndim == 0 else out
