"""Sampled paths of subordinators, their inverses and the composed process Z = X(E).

Single-path functions return :class:`GridPath` objects.  The ``*_batch``
helpers produce many paths at once as arrays and are what the Monte Carlo
experiments use; they follow the same construction:

1. the inner subordinator D is simulated on an intrinsic grid ``k * ds``
   until it exceeds the last requested time;
2. ``E(t)`` is the first grid time whose D-value exceeds ``t``;
3. X is sampled at the E-values through independent increments over the
   gaps between successive E-values (exact in law at those points).
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np

from .asymptotics import local_time_rho_potential, sec_shifted, stone_rho
from .exceptions import DegenerateGrid, DomainError, QueryBeyondRange
from .rng import as_generator
from .stable_core import (
    StableParams,
    SubordinatorParams,
    _kanter_unit,
    sample_stable,
    sample_subordinator_increment,
    validate_driver,
)


class PathKind(str, Enum):
    STEP = "RightContinuousStep"
    LINEAR = "PiecewiseLinear"


@dataclass(frozen=True, eq=False)
class GridPath:
    times: np.ndarray
    values: np.ndarray
    kind: PathKind = PathKind.STEP

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.ndim != 1 or times.shape != values.shape:
            raise ValueError("times and values must be 1-d arrays of equal length")
        if times.size == 0 or times[0] != 0.0:
            raise ValueError("a GridPath starts at time 0")
        if np.any(np.diff(times) <= 0):
            raise ValueError("times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "kind", PathKind(self.kind))

    def __len__(self):
        return self.times.size

    def at(self, t):
        """Evaluate the path at ``t`` with its interpolation convention."""
        t = np.asarray(t, dtype=float)
        if np.any(t < 0) or np.any(t > self.times[-1]):
            raise QueryBeyondRange("query time outside the simulated horizon")
        if self.kind is PathKind.LINEAR:
            out = np.interp(t, self.times, self.values)
        else:
            out = self.values[np.searchsorted(self.times, t, side="right") - 1]
        return out[()] if np.ndim(out) == 0 else out

    def to_json(self) -> str:
        return json.dumps(
            {"kind": self.kind.value, "times": self.times.tolist(), "values": self.values.tolist()}
        )

    @classmethod
    def from_json(cls, text: str) -> "GridPath":
        obj = json.loads(text)
        return cls(np.array(obj["times"]), np.array(obj["values"]), PathKind(obj["kind"]))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["time", "value"])
        for t, v in zip(self.times, self.values):
            w.writerow([repr(float(t)), repr(float(v))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, kind=PathKind.STEP) -> "GridPath":
        rows = list(csv.reader(io.StringIO(text)))
        if rows[0] != ["time", "value"]:
            raise ValueError("expected a 'time,value' header")
        data = np.array(rows[1:], dtype=float)
        return cls(data[:, 0], data[:, 1], kind)


@dataclass(frozen=True)
class CompositionSpec:
    driver: StableParams
    inner: SubordinatorParams
    horizon: float
    grid_size: int
    clock_step: Optional[float] = None
    clock_refine: float = field(default=8.0)

    def __post_init__(self):
        if self.grid_size < 2:
            raise DegenerateGrid("grid_size must be at least 2")
        if not self.horizon > 0:
            raise DegenerateGrid("horizon must be positive")
        validate_driver(self.driver)

    @property
    def outer_times(self):
        return np.linspace(0.0, self.horizon, self.grid_size)

    def intrinsic_step(self, times=None):
        """Step of the grid on which D is simulated.

        By default the D-increment over one step, ``ds**(1/beta)``, is a
        ``clock_refine**(-1/beta)`` fraction of the smallest outer time step.
        """
        if self.clock_step is not None:
            return float(self.clock_step)
        times = self.outer_times if times is None else np.asarray(times, dtype=float)
        dt = float(np.min(np.diff(times))) if times.size > 1 else float(times[0])
        return dt**self.inner.beta / (self.inner.scale_b * self.clock_refine)


class CompositionSample(NamedTuple):
    d: GridPath
    e: GridPath
    x: GridPath
    z: GridPath


def _check_grid(horizon, n):
    if n < 2:
        raise DegenerateGrid("a path needs at least two grid points")
    if not horizon > 0:
        raise DegenerateGrid("horizon must be positive")


def simulate_subordinator_path(params: SubordinatorParams, horizon, n, rng) -> GridPath:
    _check_grid(horizon, n)
    gen = as_generator(rng)
    times = np.linspace(0.0, horizon, n)
    inc = sample_subordinator_increment(params, horizon / (n - 1), gen, size=n - 1)
    return GridPath(times, np.concatenate([[0.0], np.cumsum(inc)]), PathKind.STEP)


def inverse_values(d: GridPath, query):
    """E(t) = first grid time s with d(s) > t, for each query t."""
    q = np.asarray(query, dtype=float)
    if np.any(q < 0):
        raise DomainError("query times must be non-negative")
    idx = np.searchsorted(d.values, q, side="right")
    if np.any(idx >= d.values.size):
        raise QueryBeyondRange("query level reaches the end of the subordinator path")
    out = d.times[idx]
    return out[()] if np.ndim(out) == 0 else out


def inverse_path(d: GridPath, query_times) -> GridPath:
    q = np.asarray(query_times, dtype=float)
    if np.any(np.diff(d.values) < 0):
        raise DomainError("the subordinator path must be nondecreasing")
    return GridPath(q, inverse_values(d, q), PathKind.STEP)


def simulate_driver_path(params: StableParams, clock: GridPath, rng) -> GridPath:
    """X sampled at the clock's values, through increments over the value gaps."""
    gaps = np.diff(np.concatenate([[0.0], clock.values]))
    if np.any(gaps < 0):
        raise DomainError("the clock must be nondecreasing and start at or above 0")
    inc = sample_stable(params, gaps, as_generator(rng))
    return GridPath(clock.times, np.cumsum(inc), clock.kind)


def _expected_inverse(sub: SubordinatorParams, t):
    # E[E(t)] = t**beta / (b Gamma(1+beta))
    return t**sub.beta / (sub.scale_b * math.gamma(1.0 + sub.beta))


def _subordinator_until(sub: SubordinatorParams, level, ds, gen):
    """D on the grid k*ds, k = 0..K, with D_K > level."""
    chunk = int(2.0 * _expected_inverse(sub, level) / ds) + 64
    parts = [np.zeros(1)]
    last = 0.0
    while last <= level:
        inc = sample_subordinator_increment(sub, ds, gen, size=chunk)
        cs = last + np.cumsum(inc)
        parts.append(cs)
        last = cs[-1]
    return np.concatenate(parts)


def simulate_composition(spec: CompositionSpec, rng, times=None) -> CompositionSample:
    gen = as_generator(rng)
    times = spec.outer_times if times is None else np.asarray(times, dtype=float)
    ds = spec.intrinsic_step(times)
    dvals = _subordinator_until(spec.inner, times[-1], ds, gen)
    d = GridPath(ds * np.arange(dvals.size), dvals, PathKind.STEP)
    e = inverse_path(d, times)
    x = simulate_driver_path(spec.driver, e, gen)
    return CompositionSample(d, e, x, GridPath(times, x.values, PathKind.STEP))


def compose_z(spec: CompositionSpec, rng, times=None) -> GridPath:
    return simulate_composition(spec, rng, times).z


def running_sup(path: GridPath) -> GridPath:
    return GridPath(path.times, np.maximum.accumulate(path.values), path.kind)


def first_passage(path: GridPath, levels):
    """inf{t : path(t) > x} for each level x, read on the grid.

    This is the discrete analogue of the right-continuous inverse of the
    running supremum; levels never reached map to ``inf``.
    """
    sup = np.maximum.accumulate(path.values)
    idx = np.searchsorted(sup, np.asarray(levels, dtype=float), side="right")
    out = np.where(idx < sup.size, path.times[np.minimum(idx, sup.size - 1)], np.inf)
    return out[()] if np.ndim(out) == 0 else out


def bochner_sample(beta, alpha, chi, t, rng, size=None):
    """Draw D(sigma(t)), sigma with Laplace exponent (s/c1)**(1/alpha).

    Conditionally on sigma(t), D(sigma(t)) =d sigma(t)**(1/beta) D(1).
    """
    if not 1.0 < alpha <= 2.0 or not 0.0 < beta < 1.0:
        raise DomainError("need 1 < alpha <= 2 and 0 < beta < 1")
    gen = as_generator(rng)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("t must be non-negative")
    shape = t.shape if size is None else np.broadcast_shapes(t.shape, tuple(np.atleast_1d(size)))
    c1 = sec_shifted(alpha) / chi
    sig_scale = (t * c1 ** (-1.0 / alpha)) ** alpha
    sigma = sig_scale * _kanter_unit(1.0 / alpha, shape, gen)
    out = sigma ** (1.0 / beta) * _kanter_unit(beta, shape, gen)
    out = np.where(t == 0.0, 0.0, out)
    return out[()] if out.ndim == 0 else out


def bochner_path_batch(beta, alpha, chi, times, n_paths, rng):
    """Paths of the subordinator D o sigma at the given increasing times."""
    gaps = np.diff(np.concatenate([[0.0], np.asarray(times, dtype=float)]))
    inc = bochner_sample(beta, alpha, chi, np.broadcast_to(gaps, (n_paths, gaps.size)), rng)
    return np.cumsum(inc, axis=1)


def local_time_clock(gamma_, y_params: StableParams, rho_method="stone"):
    """(beta, rho) such that L(t) = E(rho t) with beta = 1 - 1/gamma."""
    if not 1.0 < gamma_ <= 2.0:
        raise DomainError(f"gamma={gamma_} must lie in (1, 2]")
    beta = 1.0 - 1.0 / gamma_
    if rho_method == "stone":
        rho = stone_rho(gamma_, y_params.chi, y_params.nu)
    elif rho_method == "potential":
        rho = local_time_rho_potential(gamma_, y_params.chi, y_params.nu)
    else:
        raise ValueError(f"unknown rho_method {rho_method!r}")
    return beta, rho


def levy_local_time_oracle(horizon, n, rng) -> GridPath:
    """Brownian local time at zero, realized as the running max of a standard BM."""
    _check_grid(horizon, n)
    gen = as_generator(rng)
    dt = horizon / (n - 1)
    b = np.concatenate([[0.0], np.cumsum(gen.standard_normal(n - 1) * math.sqrt(dt))])
    return GridPath(np.linspace(0.0, horizon, n), np.maximum.accumulate(b), PathKind.STEP)


def levy_local_time_batch(horizon, n, n_paths, rng, chunk=256):
    """L(horizon) for many paths via the same construction as the oracle."""
    gen = as_generator(rng)
    dt = horizon / (n - 1)
    out = np.empty(n_paths)
    for start in range(0, n_paths, chunk):
        m = min(chunk, n_paths - start)
        b = np.cumsum(gen.standard_normal((m, n - 1)) * math.sqrt(dt), axis=1)
        out[start:start + m] = np.maximum(b.max(axis=1), 0.0)
    return out


def inverse_at_batch(sub: SubordinatorParams, levels, n_paths, rng, ds):
    """Grid indices k with E(level) = k*ds, shape (n_paths, len(levels)).

    D is advanced in chunks for all unfinished paths at once.
    """
    gen = as_generator(rng)
    levels = np.asarray(levels, dtype=float)
    if np.any(np.diff(levels) < 0):
        raise DomainError("levels must be sorted")
    out = np.full((n_paths, levels.size), -1, dtype=np.int64)
    current = np.zeros(n_paths)
    steps_done = 0
    active = np.arange(n_paths)
    chunk = int(_expected_inverse(sub, levels[-1]) / ds) + 64
    while active.size:
        inc = sample_subordinator_increment(sub, ds, gen, size=(active.size, chunk))
        cs = current[active, None] + np.cumsum(inc, axis=1)
        for j, lev in enumerate(levels):
            pending = out[active, j] < 0
            if not pending.any():
                continue
            hit = cs[pending] > lev
            found = hit.any(axis=1)
            rows = active[pending][found]
            out[rows, j] = steps_done + 1 + np.argmax(hit[found], axis=1)
        current[active] = cs[:, -1]
        steps_done += chunk
        active = active[out[active, -1] < 0]
    return out


def z_at_batch(spec: CompositionSpec, times, n_paths, rng, ds=None):
    """Z at the given increasing times for many paths, shape (n_paths, len(times))."""
    gen = as_generator(rng)
    times = np.asarray(times, dtype=float)
    ds = spec.intrinsic_step(np.concatenate([[0.0], times])) if ds is None else ds
    e = inverse_at_batch(spec.inner, times, n_paths, gen, ds) * ds
    gaps = np.diff(np.concatenate([np.zeros((n_paths, 1)), e], axis=1), axis=1)
    return np.cumsum(sample_stable(spec.driver, gaps, gen), axis=1)
