"""Closed-form constants for the path asymptotics of Z = X(E) and empirical probes.

Notation: theta = beta/alpha is the index of the subordinator that inverts the
running supremum of Z; its Laplace exponent is ``b * s**theta`` with
``b = c1**(-1/alpha)`` and ``c1 = sec(pi - pi*alpha/2) / chi``.

Two limsup constants are reported for the law of the iterated logarithm:

``kappa_paper``
    ``c_liminf**theta = mu**((alpha-beta)/alpha)``, the constant as printed.
``kappa_consistent``
    ``mu**(-(alpha-beta)/alpha)``, obtained by inverting the liminf law of the
    subordinator, which is also the critical boundary of the Kolmogorov test.

The modulus constant is treated the same way (``d`` and ``d_consistent``).
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from math import gamma

import numpy as np

from .exceptions import DegenerateRe, DomainError


@dataclass(frozen=True)
class DerivedConstants:
    alpha: float
    beta: float
    chi: float
    theta: float
    lam: float
    c1: float
    b: float
    m: float
    mu: float
    c_liminf: float
    kappa_paper: float
    kappa_consistent: float
    c2: float
    d: float
    d_consistent: float

    def to_dict(self):
        return asdict(self)

    def identity_residuals(self):
        """Relative residuals of the algebraic identities linking the fields."""
        th = self.theta
        return {
            "lambda": abs(self.lam - th / (1.0 - th)) / self.lam,
            "m_gamma": abs(self.m * gamma(1.0 - th) - self.b * th) / (self.b * th),
            "mu_closed_form": abs(
                self.mu - (self.b * th) ** (1.0 / (1.0 - th)) * (1.0 - th) / th
            ) / self.mu,
            "kappa_product": abs(self.kappa_paper * self.kappa_consistent - 1.0),
            "c2_alt": abs(self.c2 - (1.0 - th) * th ** (th / (1.0 - th))) / self.c2,
        }


def _check_domain(alpha, beta, chi=1.0):
    if not 1.0 < alpha <= 2.0:
        raise DomainError(f"alpha={alpha} must lie in (1, 2]")
    if not 0.0 < beta < 1.0:
        raise DomainError(f"beta={beta} must lie in (0, 1)")
    if not chi > 0.0:
        raise DomainError(f"chi={chi} must be positive")


def sec_shifted(alpha):
    """sec(pi - pi*alpha/2); the cosine lies in (0, 1] on (1, 2]."""
    cos_val = math.cos(math.pi - math.pi * alpha / 2.0)
    if alpha == 2.0:
        cos_val = 1.0
    return 1.0 / cos_val


def derive_constants(alpha, beta, chi=1.0) -> DerivedConstants:
    alpha, beta, chi = float(alpha), float(beta), float(chi)
    _check_domain(alpha, beta, chi)
    theta = beta / alpha
    lam = theta / (1.0 - theta)
    c1 = sec_shifted(alpha) / chi
    b = c1 ** (-1.0 / alpha)
    m = b * theta / gamma(1.0 - theta)
    mu = (gamma(1.0 - theta) * m) ** (alpha / (alpha - beta)) * (alpha - beta) / beta
    c_liminf = mu ** (1.0 / lam)
    kappa_paper = c_liminf**theta
    kappa_consistent = mu ** (-(alpha - beta) / alpha)
    c2, d = modulus_constants(alpha, beta)
    return DerivedConstants(
        alpha=alpha, beta=beta, chi=chi, theta=theta, lam=lam, c1=c1, b=b, m=m, mu=mu,
        c_liminf=c_liminf, kappa_paper=kappa_paper, kappa_consistent=kappa_consistent,
        c2=c2, d=d, d_consistent=modulus_constant_consistent(alpha, beta),
    )


def _loglog_abs(t):
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise DomainError("t must be positive")
    ll = np.log(np.abs(np.log(t)))
    if np.any(ll <= 0):
        raise DomainError("log|log t| must be positive (|log t| > 1)")
    return ll


def fristedt_normalizer(t, alpha, beta):
    """t**(alpha/beta) * (log|log t|)**((beta-alpha)/beta)."""
    ll = _loglog_abs(t)
    out = np.asarray(t, dtype=float) ** (alpha / beta) * ll ** ((beta - alpha) / beta)
    return out[()] if np.ndim(out) == 0 else out


def lil_normalizer(t, alpha, beta):
    """t**(beta/alpha) * (log|log t|)**((alpha-beta)/alpha)."""
    ll = _loglog_abs(t)
    out = np.asarray(t, dtype=float) ** (beta / alpha) * ll ** ((alpha - beta) / alpha)
    return out[()] if np.ndim(out) == 0 else out


def lil_limsup_constants(dc: DerivedConstants):
    return dc.kappa_paper, dc.kappa_consistent


def stone_rho(gamma_, chi, nu=0.0):
    """rho with rho**(-(1-1/gamma)) = Gamma(1+1/g)Gamma(1-1/g)/(pi chi) * Re[(1+i nu tan(pi g/2))**(-1/g)]."""
    g = float(gamma_)
    if not 1.0 < g <= 2.0:
        raise DomainError(f"gamma={g} must lie in (1, 2]")
    if not chi > 0:
        raise DomainError("chi must be positive")
    re = _skew_re_term(g, nu)
    k = gamma(1.0 + 1.0 / g) * gamma(1.0 - 1.0 / g) / (math.pi * chi) * re
    return float(k ** (-1.0 / (1.0 - 1.0 / g)))


def local_time_rho_potential(gamma_, chi, nu=0.0):
    """rho for L(t) = E(rho t) with L the occupation-density local time at zero.

    The inverse local time of Y has Laplace exponent 1/u^s(0), where the
    s-potential density at the origin is
    ``Gamma(1+1/g)Gamma(1-1/g)/pi * chi**(1/g) * Re[(1+i nu tan(pi g/2))**(-1/g)] * s**(1/g - 1)``.
    Matching it with ``rho**(-beta) s**beta`` gives the value returned here;
    for Brownian motion (g = 2, chi = 2) it is 1/2, in agreement with Levy's
    identity L(1) =d |N(0, 1)|.
    """
    g = float(gamma_)
    if not 1.0 < g <= 2.0:
        raise DomainError(f"gamma={g} must lie in (1, 2]")
    if not chi > 0:
        raise DomainError("chi must be positive")
    re = _skew_re_term(g, nu)
    k = gamma(1.0 + 1.0 / g) * gamma(1.0 - 1.0 / g) / math.pi * chi ** (1.0 / g) * re
    return float(k ** (1.0 / (1.0 - 1.0 / g)))


def _skew_re_term(g, nu):
    tan = 0.0 if g == 2.0 else math.tan(math.pi * g / 2.0)
    re = (complex(1.0, nu * tan) ** (-1.0 / g)).real
    if not re > 0:
        raise DegenerateRe(f"Re[(1 + i nu tan)^(-1/gamma)] = {re} is not positive")
    return re


def modulus_constants(alpha, beta):
    """(c2, d) with c2 = (1-theta) theta**(theta/(1-theta)), d = (alpha c2/beta)**(1-theta)."""
    _check_domain(alpha, beta)
    th = beta / alpha
    c2 = (1.0 - beta / alpha) * (beta / alpha) ** (beta / (alpha - beta))
    d = (alpha * c2 / beta) ** (1.0 - th)
    return float(c2), float(d)


def modulus_constant_consistent(alpha, beta):
    """Modulus constant obtained by inverting the lower modulus of the subordinator.

    The subordinator's increments over level windows of size x satisfy
    ``inf = c2**((1-theta)/theta) x**(1/theta) (log 1/x)**(-(1-theta)/theta)``;
    solving for x at time window h yields ``(theta/c2)**(1-theta)``.
    """
    c2, _ = modulus_constants(alpha, beta)
    th = beta / alpha
    return float((th / c2) ** (1.0 - th))


def local_time_lil_constants(gamma_, chi_y=2.0, nu_y=0.0, chi_w=1.0, rho_method="stone"):
    """LIL constants for W(L(t)) with beta = 1 - 1/gamma.

    ``composed_*`` rescale the Z constants through Z(rho t) =d rho**theta Z(t);
    ``literal`` evaluates ``(rho * c(beta, 2))**((gamma-1)/(2 gamma))``.
    """
    beta = 1.0 - 1.0 / gamma_
    if rho_method == "stone":
        rho = stone_rho(gamma_, chi_y, nu_y)
    elif rho_method == "potential":
        rho = local_time_rho_potential(gamma_, chi_y, nu_y)
    else:
        raise ValueError(f"unknown rho_method {rho_method!r}")
    dc = derive_constants(2.0, beta, chi_w)
    th = dc.theta
    return {
        "beta": beta,
        "rho": rho,
        "literal": (rho * dc.c_liminf) ** ((gamma_ - 1.0) / (2.0 * gamma_)),
        "composed_paper": rho**th * dc.kappa_paper,
        "composed_consistent": rho**th * dc.kappa_consistent,
    }


def dyadic_times(t_lo, t_hi):
    j_lo = math.ceil(math.log2(t_lo))
    j_hi = math.floor(math.log2(t_hi))
    return 2.0 ** np.arange(j_lo, j_hi + 1)


def summarize(stats):
    stats = np.asarray(stats, dtype=float)
    return {
        "median": float(np.median(stats)),
        "q10": float(np.quantile(stats, 0.1)),
        "q90": float(np.quantile(stats, 0.9)),
        "n": int(stats.size),
    }


def limsup_statistic(times, values, alpha, beta):
    """Row-wise max of values/lil_normalizer(times); values is (n_paths, n_times)."""
    norm = lil_normalizer(times, alpha, beta)
    return np.max(np.atleast_2d(values) / norm, axis=1)


def empirical_limsup_stat(paths, t_lo, t_hi, alpha, beta):
    """Per-path max of Z(t)/lil_normalizer(t) over dyadic t in [t_lo, t_hi].

    ``paths`` is a sequence of GridPath objects read with the step convention.
    """
    if not t_lo > math.e:
        raise DomainError("t_lo must exceed e so that log log t > 0")
    ts = dyadic_times(t_lo, t_hi)
    if ts.size == 0:
        raise DomainError("no dyadic time in [t_lo, t_hi]")
    vals = np.array([p.at(ts) for p in paths])
    stats = limsup_statistic(ts, vals, alpha, beta)
    return stats, summarize(stats)


def empirical_liminf_subordinator_stat(samples, t_grid, alpha, beta):
    """Per-path min of (D o sigma)(t)/fristedt_normalizer(t) along a time grid."""
    norm = fristedt_normalizer(t_grid, alpha, beta)
    stats = np.min(np.atleast_2d(samples) / norm, axis=1)
    return stats, summarize(stats)


def empirical_modulus_stat(zbar, h_grid, alpha, beta):
    """sup over t, h of (Zbar(t+h) - Zbar(t)) / (h**theta (log 1/h)**(1-theta)).

    ``zbar`` must live on a uniform grid; each h is rounded to a whole number
    of grid steps and the rounded value enters the normalizer.
    """
    h_grid = np.asarray(h_grid, dtype=float)
    if np.any(h_grid <= 0) or np.any(h_grid >= math.exp(-1.0)):
        raise DomainError("h must lie in (0, 1/e)")
    times, vals = np.asarray(zbar.times), np.asarray(zbar.values)
    dt = times[1] - times[0]
    if not np.allclose(np.diff(times), dt, rtol=1e-9, atol=0.0):
        raise DomainError("the modulus statistic needs a uniform grid")
    th = beta / alpha
    best = 0.0
    for h in h_grid:
        m = max(int(round(h / dt)), 1)
        if m >= vals.size:
            continue
        hh = m * dt
        if hh >= math.exp(-1.0):
            continue
        inc = float(np.max(vals[m:] - vals[:-m]))
        best = max(best, inc / (hh**th * math.log(1.0 / hh) ** (1.0 - th)))
    return best


def favored_constant(stats, kappa_paper, kappa_consistent):
    """Name of the constant closer (in log ratio) to the median statistic."""
    med = float(np.median(stats))
    if med <= 0:
        return "paper" if kappa_paper < kappa_consistent else "breiman-consistent"
    dp = abs(math.log(med / kappa_paper))
    dc = abs(math.log(med / kappa_consistent))
    return "paper" if dp < dc else "breiman-consistent"
