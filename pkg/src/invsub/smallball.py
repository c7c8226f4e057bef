"""Small-ball probabilities P(sup_{t<=1} |Z(t)| <= u).

For Z = W(E(t)) with W a Brownian motion, conditioning on E(1) in Chung's
series gives

    P = (4/pi) sum_{k>=1} (-1)**(k-1) / (2k-1) * E_beta(-(2k-1)**2 pi**2 / (8 u**2)),

an alternating series with decreasing terms, so the truncation error is at
most the first omitted term.  As u -> 0 the Mittag-Leffler tail turns this
into a power law u**2 times an explicit constant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, NoConvergence
from .mittag_leffler import DEFAULT_CONFIG, ml_neg
from .pathsim import CompositionSpec
from .rng import map_blocks
from .stable_core import _kanter_unit, sample_stable, sample_subordinator_increment
from .statstest import EstimateWithCI, proportion_ci


@dataclass(frozen=True)
class SmallBallSeriesConfig:
    k_max: int = 1_000_000
    remainder_tol: float = 1e-13

    def __post_init__(self):
        if self.k_max < 1:
            raise ValueError("k_max must be positive")
        if not 0.0 < self.remainder_tol < 1.0:
            raise ValueError("remainder_tol must lie in (0, 1)")


DEFAULT_SERIES = SmallBallSeriesConfig()


def _alternating_odd_series(f, cfg: SmallBallSeriesConfig):
    """(4/pi) sum (-1)**(k-1)/(2k-1) f(2k-1), stopping on the remainder bound.

    ``f`` is evaluated on arrays of odd integers.  Terms are generated in
    growing chunks; the stop rule is |next term| <= remainder_tol * |sum|.
    """
    parts = []
    start, chunk = 1, 64
    prev_last = math.inf
    while start <= cfg.k_max:
        k = np.arange(start, min(start + chunk, cfg.k_max + 1))
        odd = 2.0 * k - 1.0
        mag = np.asarray(f(odd), dtype=float) / odd
        # Small slack for rounding where the ML evaluation switches branch.
        if np.any(np.diff(mag) > 1e-12 * mag[:-1]) or mag[0] > prev_last * (1 + 1e-12):
            raise NoConvergence("series terms stopped decreasing in magnitude")
        signs = np.where(k % 2 == 1, 1.0, -1.0)
        parts.append(signs * mag)
        total = math.fsum(np.concatenate(parts))
        below = np.flatnonzero(mag <= cfg.remainder_tol * abs(total))
        if below.size:
            # Keep terms up to the first one under the bound; it bounds the rest.
            cut = below[0]
            parts[-1] = parts[-1][:cut]
            return 4.0 / math.pi * math.fsum(np.concatenate(parts))
        prev_last = mag[-1]
        start += chunk
        chunk *= 2
    raise NoConvergence(f"series needs more than k_max={cfg.k_max} terms")


def _check_u(u):
    if not u > 0:
        raise DomainError("u must be positive")
    return float(u)


def chung_smallball_bm(u, cfg: SmallBallSeriesConfig = DEFAULT_SERIES):
    """P(sup_{t<=1} |B(t)| <= u) for a standard Brownian motion B."""
    u = _check_u(u)
    c = math.pi**2 / (8.0 * u * u)
    return min(1.0, _alternating_odd_series(lambda odd: np.exp(-c * odd * odd), cfg))


def smallball_Z_series(beta, u, cfg: SmallBallSeriesConfig = DEFAULT_SERIES, ml_cfg=DEFAULT_CONFIG):
    """P(sup_{t<=1} |W(E(t))| <= u); beta = 1 reduces to Chung's formula."""
    u = _check_u(u)
    if not 0.0 < beta <= 1.0:
        raise DomainError(f"beta={beta} must lie in (0, 1]")
    if beta == 1.0:
        return chung_smallball_bm(u, cfg)
    c = math.pi**2 / (8.0 * u * u)
    return min(1.0, _alternating_odd_series(lambda odd: ml_neg(beta, c * odd * odd, ml_cfg), cfg))


def alternating_cube_sum(tol=1e-13):
    """sum_{k>=1} (-1)**(k-1) / (2k-1)**3 by direct summation.

    The alternating remainder is below the first omitted term, so summing
    until 1/(2k-1)**3 <= tol bounds the error by tol.
    """
    k_stop = int(math.ceil((tol ** (-1.0 / 3.0) + 1.0) / 2.0))
    k = np.arange(1, k_stop + 1)
    terms = np.where(k % 2 == 1, 1.0, -1.0) / (2.0 * k - 1.0) ** 3
    return math.fsum(terms)


def smallball_Z_limit_constant(beta):
    """lim_{u->0} u**(-2) P(sup_{t<=1} |W(E(t))| <= u)."""
    if not 0.0 < beta < 1.0:
        raise DomainError(f"beta={beta} must lie in (0, 1)")
    return 32.0 * math.gamma(beta) * math.sin(beta * math.pi) / math.pi**4 * alternating_cube_sum()


def selfsimilar_envelope(H, k_const, nu_slack, beta, u, c_lo, c_hi, ml_cfg=DEFAULT_CONFIG):
    """Bracket of P(sup|U(E(t))| <= u) for an H-self-similar U.

    Returns ``(c_lo E_beta(-k(1+nu) u**-theta), c_hi E_beta(-k(1-nu) u**-theta))``
    with theta = 1/H; the constants come from the caller's small-ball bounds
    for U itself.
    """
    if not 0.0 < H < 1.0:
        raise DomainError("H must lie in (0, 1)")
    if not 0.0 < nu_slack < 1.0:
        raise DomainError("nu_slack must lie in (0, 1)")
    if not (k_const > 0 and c_lo > 0 and c_hi > 0):
        raise DomainError("k_const, c_lo, c_hi must be positive")
    u = _check_u(u)
    theta = 1.0 / H
    scale = k_const * u ** (-theta)
    lower = c_lo * ml_neg(beta, scale * (1.0 + nu_slack), ml_cfg)
    upper = c_hi * ml_neg(beta, scale * (1.0 - nu_slack), ml_cfg)
    return float(lower), float(upper)


# ---------------------------------------------------------------- Monte Carlo


@dataclass(frozen=True)
class SmallBallMC:
    """Estimate on the requested grid plus the coupled estimate on the doubled grid."""

    u: float
    estimate: EstimateWithCI
    doubled: EstimateWithCI
    grid: int
    method: str

    @property
    def bias_indicator(self):
        """Relative drop of the estimate when the grid is doubled."""
        if self.estimate.mean == 0:
            return 0.0
        return (self.estimate.mean - self.doubled.mean) / self.estimate.mean

    def to_dict(self):
        return {
            "u": self.u,
            "estimate": self.estimate.to_dict(),
            "doubled": self.doubled.to_dict(),
            "grid": self.grid,
            "method": self.method,
            "bias_indicator": self.bias_indicator,
        }


def _advance_until(spec, m, ds, gen, level):
    """D and X on the intrinsic grid k*ds until every path has D > level."""
    d_parts, x_parts = [np.zeros((m, 1))], [np.zeros((m, 1))]
    d_cur, x_cur = np.zeros(m), np.zeros(m)
    chunk = int(1.5 * level**spec.inner.beta / (spec.inner.scale_b * ds)) + 64
    while np.any(d_cur <= level):
        d = d_cur[:, None] + np.cumsum(sample_subordinator_increment(spec.inner, ds, gen, size=(m, chunk)), axis=1)
        x = x_cur[:, None] + np.cumsum(sample_stable(spec.driver, ds, gen, size=(m, chunk)), axis=1)
        d_parts.append(d)
        x_parts.append(x)
        d_cur, x_cur = d[:, -1], x[:, -1]
    return np.concatenate(d_parts, axis=1), np.concatenate(x_parts, axis=1)


def _outer_grid_sup(d, x, dt, n):
    """max_j |Z(j dt)|, j = 0..n-1, with Z = X(E) read from intrinsic-grid arrays.

    Z(j dt) = X_k for the k with D_{k-1} <= j dt < D_k, so index k is seen by
    the outer grid iff some multiple of dt falls in [D_{k-1}, D_k).
    """
    c = np.ceil(d / dt)
    visible = (c[:, 1:] > c[:, :-1]) & (c[:, :-1] <= n - 1)
    return np.max(np.where(visible, np.abs(x[:, 1:]), 0.0), axis=1)


def _block_outer(spec, n, ds):
    T = spec.horizon
    fine_n = 2 * (n - 1) + 1

    def run(start, stop, stream):
        gen = stream.generator()
        d, x = _advance_until(spec, stop - start, ds, gen, T)
        return (
            _outer_grid_sup(d, x, T / (n - 1), n),
            _outer_grid_sup(d, x, T / (fine_n - 1), fine_n),
        )

    return run


def _block_clock(spec, n):
    """sup_{t<=T} |X(E(t))| = sup_{s<=E(T)} |X(s)|, read on a grid over [0, E(T)].

    E(T) =d (T / D(1))**beta is drawn exactly; X is sampled on n points (and
    the coupled 2n-1 points) of [0, E(T)].
    """
    T, beta, b = spec.horizon, spec.inner.beta, spec.inner.scale_b
    fine = 2 * (n - 1)

    def run(start, stop, stream):
        gen = stream.generator()
        m = stop - start
        d1 = b ** (1.0 / beta) * _kanter_unit(beta, m, gen)
        e_t = (T / d1) ** beta
        step = (e_t / fine)[:, None]
        x = np.cumsum(sample_stable(spec.driver, np.broadcast_to(step, (m, fine)), gen), axis=1)
        ax = np.abs(x)
        return np.max(ax[:, 1::2], axis=1), np.max(ax, axis=1)

    return run


def mc_smallball_sups(spec: CompositionSpec, n_paths, seed, method="outer", threads=1, block_size=None):
    """Grid suprema of |Z| on [0, T] at grid sizes n and 2n-1 (coupled).

    ``method="outer"`` reads Z on the uniform outer time grid, as in the
    sampled-path definition.  ``method="clock"`` uses the continuity of E and
    reads X on a uniform grid of intrinsic time instead.
    """
    n = spec.grid_size
    if method == "outer":
        ds = spec.intrinsic_step(np.linspace(0.0, spec.horizon, 2 * (n - 1) + 1))
        fn, bs = _block_outer(spec, n, ds), block_size or 256
    elif method == "clock":
        fn, bs = _block_clock(spec, n), block_size or max(16, 2**22 // (2 * n))
    else:
        raise ValueError(f"unknown method {method!r}")
    res = map_blocks(fn, seed, n_paths, bs, threads)
    return np.concatenate([r[0] for r in res]), np.concatenate([r[1] for r in res])


def mc_smallball(spec: CompositionSpec, u, n_paths, seed, method="outer", threads=1,
                 level=0.9973, block_size=None):
    """Fraction of paths with grid-sup |Z| <= u, for a scalar or a list of u.

    The same paths serve every u.  Returns a :class:`SmallBallMC` (or a list).
    """
    us = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any(us <= 0):
        raise DomainError("u must be positive")
    s_n, s_2n = mc_smallball_sups(spec, n_paths, seed, method, threads, block_size)
    out = []
    for uu in us:
        est = proportion_ci(int(np.sum(s_n <= uu)), n_paths, level, seed)
        dbl = proportion_ci(int(np.sum(s_2n <= uu)), n_paths, level, seed)
        out.append(SmallBallMC(float(uu), est, dbl, spec.grid_size, method))
    return out[0] if np.ndim(u) == 0 else out


def within_tolerance(mc: SmallBallMC, analytic, rel=0.02) -> bool:
    """|estimate - analytic| <= max(3 sigma, rel * analytic)."""
    sigma = mc.estimate.sigma
    return abs(mc.estimate.mean - analytic) <= max(3.0 * sigma, rel * analytic)
