"""Command-line front end.

Every subcommand writes CSV (default) or JSON to ``--out`` or standard output.
JSON documents share the top-level layout ``{config, results, diagnostics}``;
CSV files start with one ``# config: {...}`` comment line followed by a header
row.  Output depends only on argv, so reruns are byte-identical; wall-clock
runtime goes to standard error unless ``--embed-runtime`` is given.

Exit codes: 0 success, 1 usage error, 2 numeric failure, 3 a verification
subcommand found a disagreement beyond tolerance.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .asymptotics import derive_constants
from .exceptions import DomainError, InvsubError, NoConvergence, ParameterError, QueryBeyondRange
from .experiments import (
    bochner_check,
    lil_experiment,
    local_time_check,
    modulus_experiment,
    smallball_experiment,
)
from .integral_tests import classify, make_family
from .mittag_leffler import ml_neg
from .pathsim import CompositionSpec, running_sup, simulate_composition
from .smallball import smallball_Z_series
from .stable_core import StableParams, SubordinatorParams, validate_params

THREADS_ENV = "INVSUB_THREADS"

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _default_threads():
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _common(p, seed=True):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output file (default: standard output)")
    p.add_argument("--embed-runtime", action="store_true",
                   help="include wall-clock runtime in the output (breaks byte-identical reruns)")
    if seed:
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=None,
                       help=f"worker threads (default: ${THREADS_ENV} or 1); never changes results")


def build_parser():
    parser = _Parser(prog="invsub", description="Inverse stable subordinators and time-changed stable processes.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ml", help="Mittag-Leffler E_beta(-z)", description="CSV columns: z,value")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--z", type=float, nargs="+", required=True)
    _common(p, seed=False)

    p = sub.add_parser("smallball", help="small-ball probabilities, series and Monte Carlo",
                       description="CSV columns: u,analytic,mc_estimate,ci_halfwidth,mc_doubled,grid,paths,seed,method")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--chi", type=float, default=2.0)
    p.add_argument("--u", type=float, nargs="+", required=True)
    p.add_argument("--paths", type=int, default=10_000)
    p.add_argument("--grid", type=int, default=2**14)
    p.add_argument("--method", choices=("outer", "clock"), default="outer")
    p.add_argument("--analytic-only", action="store_true")
    _common(p)

    p = sub.add_parser("paths", help="one sampled path of D, E, Z or its running sup",
                       description="CSV columns: time,value")
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--nu", type=float, default=1.0)
    p.add_argument("--chi", type=float, default=2.0)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--horizon", type=float, default=1.0)
    p.add_argument("--grid", type=int, default=1025)
    p.add_argument("--which", choices=("d", "e", "z", "zbar"), default="z")
    _common(p)

    p = sub.add_parser("bochner-check", help="law of D o sigma against its closed form",
                       description="CSV columns: s,estimate,sigma,target,passed")
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--chi", type=float, default=1.0)
    p.add_argument("--draws", type=int, default=10_000)
    p.add_argument("--s", type=float, nargs="+", default=[0.5, 1.0, 2.0])
    _common(p)

    p = sub.add_parser("constants", help="derived constants table", description="CSV columns: name,value")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--chi", type=float, default=1.0)
    _common(p, seed=False)

    p = sub.add_parser("lil", help="empirical LIL statistic per path", description="CSV columns: path,statistic")
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--chi", type=float, default=2.0)
    p.add_argument("--paths", type=int, default=200)
    p.add_argument("--t-lo", type=float, default=math.exp(2.0))
    p.add_argument("--t-hi", type=float, default=2.0**20)
    _common(p)

    p = sub.add_parser("modulus", help="empirical modulus statistic per path", description="CSV columns: path,statistic")
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--chi", type=float, default=1.0)
    p.add_argument("--paths", type=int, default=50)
    p.add_argument("--grid-log2", type=int, default=16)
    p.add_argument("--h-lo-log2", type=int, default=-16)
    p.add_argument("--h-hi-log2", type=int, default=-4)
    _common(p)

    p = sub.add_parser("integral-test", help="classify an envelope integral",
                       description="CSV columns: which,family,params,small_time,outcome,basis")
    p.add_argument("--which", choices=("kolmogorov", "breiman", "hirsch"), required=True)
    p.add_argument("--family", required=True)
    p.add_argument("--params", type=float, nargs="*", default=[])
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--chi", type=float, default=2.0)
    p.add_argument("--small-time", action="store_true")
    p.add_argument("--method", choices=("auto", "analytic", "numeric"), default="auto")
    _common(p, seed=False)

    p = sub.add_parser("local-time-check", help="Brownian local time against E(rho t)",
                       description="CSV columns: gamma,beta,rho,rho_method,ks_statistic,ks_pvalue,passed")
    p.add_argument("--gamma", type=float, default=2.0)
    p.add_argument("--chi", type=float, default=2.0)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--grid", type=int, default=2**14)
    p.add_argument("--rho-method", choices=("stone", "potential"), default="stone")
    _common(p)
    return parser


# ---------------------------------------------------------------- handlers
# Each returns (results, diagnostics, csv_header, csv_rows, verification_ok).


def _ml(a):
    vals = ml_neg(a.beta, np.array(a.z))
    rows = [[z, float(v)] for z, v in zip(a.z, np.atleast_1d(vals))]
    return [{"z": z, "value": v} for z, v in rows], {}, ["z", "value"], rows, True


def _smallball(a):
    validate_params(a.alpha, 1.0, a.chi)
    if a.analytic_only:
        rows = [[u, smallball_Z_series(a.beta, u), "", "", "", a.grid, 0, a.seed, "analytic"] for u in a.u]
    else:
        res = smallball_experiment(a.alpha, a.beta, a.chi, a.u, a.paths, a.grid, a.seed, a.method, a.threads)
        rows = []
        for r in res:
            mc = r["mc"]
            rows.append([mc.u, "" if r["analytic"] is None else r["analytic"], mc.estimate.mean,
                         mc.estimate.half_width, mc.doubled.mean, a.grid, a.paths, a.seed, a.method])
    header = ["u", "analytic", "mc_estimate", "ci_halfwidth", "mc_doubled", "grid", "paths", "seed", "method"]
    results = [dict(zip(header, r)) for r in rows]
    for r in results:
        for k in ("analytic", "mc_estimate", "ci_halfwidth", "mc_doubled"):
            if r[k] == "":
                r[k] = None
    return results, {}, header, rows, True


def _paths(a):
    spec = CompositionSpec(validate_params(a.alpha, a.nu, a.chi), SubordinatorParams(a.beta), a.horizon, a.grid)
    sample = simulate_composition(spec, a.seed)
    path = {"d": sample.d, "e": sample.e, "z": sample.z, "zbar": running_sup(sample.z)}[a.which]
    rows = [[float(t), float(v)] for t, v in zip(path.times, path.values)]
    results = {"kind": path.kind.value, "times": path.times.tolist(), "values": path.values.tolist()}
    return results, {"points": len(path)}, ["time", "value"], rows, True


def _bochner(a):
    res = bochner_check(a.alpha, a.beta, a.chi, a.draws, a.s, a.seed)
    rows = [[r["s"], r["estimate"], r["sigma"], r["target"], r["passed"]] for r in res["laplace"]]
    ok = res["ks_passed"] and all(r["passed"] for r in res["laplace"])
    diag = {"ks_statistic": res["ks_statistic"], "ks_pvalue": res["ks_pvalue"], "ks_passed": res["ks_passed"]}
    return res["laplace"], diag, ["s", "estimate", "sigma", "target", "passed"], rows, ok


def _constants(a):
    dc = derive_constants(a.alpha, a.beta, a.chi)
    table = dc.to_dict()
    table["kappa_breiman_consistent"] = table["kappa_consistent"]
    rows = [[k, v] for k, v in table.items()]
    diag = {"labels": {"kappa_paper": "paper", "kappa_consistent": "breiman-consistent"},
            "identity_residuals": dc.identity_residuals()}
    return table, diag, ["name", "value"], rows, True


def _lil(a):
    res = lil_experiment(a.alpha, a.beta, a.chi, a.paths, a.t_lo, a.t_hi, a.seed, a.threads)
    rows = [[i, float(s)] for i, s in enumerate(res["stats"])]
    diag = {k: res[k] for k in ("summary", "kappa_paper", "kappa_consistent",
                                "frac_at_least_half_consistent", "frac_above_1p5_max", "favored", "ds")}
    diag["times"] = res["times"].tolist()
    return [{"path": i, "statistic": s} for i, s in rows], diag, ["path", "statistic"], rows, True


def _modulus(a):
    res = modulus_experiment(a.alpha, a.beta, a.chi, a.paths, a.grid_log2, a.h_lo_log2, a.h_hi_log2,
                             a.seed, a.threads)
    rows = [[i, float(s)] for i, s in enumerate(res["stats"])]
    diag = {k: res[k] for k in ("summary", "d", "d_consistent", "ratio_median_to_d")}
    return [{"path": i, "statistic": s} for i, s in rows], diag, ["path", "statistic"], rows, True


def _integral(a):
    try:
        fam = make_family(a.family, a.params)
    except TypeError as exc:
        raise UsageError(f"bad --params for {a.family}: {exc}") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    v = classify(a.which, fam, a.alpha, a.beta, a.chi, a.small_time, a.method)
    params = " ".join(repr(p) for p in a.params)
    rows = [[a.which, a.family, params, a.small_time, v.outcome.value, v.basis.value]]
    header = ["which", "family", "params", "small_time", "outcome", "basis"]
    return v.to_dict(), {}, header, rows, True


def _local_time(a):
    res = local_time_check(a.gamma, a.chi, a.samples, a.seed, a.rho_method, a.grid, threads=a.threads)
    header = ["gamma", "beta", "rho", "rho_method", "ks_statistic", "ks_pvalue", "passed"]
    rows = [[res[k] for k in header]]
    return res, {"mean_E_rho": res["mean_E_rho"], "mean_L1": res["mean_L1"]}, header, rows, res["passed"]


HANDLERS = {
    "ml": _ml,
    "smallball": _smallball,
    "paths": _paths,
    "bochner-check": _bochner,
    "constants": _constants,
    "lil": _lil,
    "modulus": _modulus,
    "integral-test": _integral,
    "local-time-check": _local_time,
}


def _config(a):
    cfg = {k: v for k, v in sorted(vars(a).items()) if k not in ("out", "format", "embed_runtime")}
    cfg["version"] = __version__
    return cfg


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def render(a, results, diagnostics, header, rows) -> str:
    config = _config(a)
    if a.format == "json":
        doc = {"config": config, "results": results, "diagnostics": diagnostics}
        return json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(_jsonable(config), sort_keys=True) + "\n")
    if diagnostics:
        buf.write("# diagnostics: " + json.dumps(_jsonable(diagnostics), sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(x) if isinstance(x, float) else x for x in r])
    return buf.getvalue()


def run(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    if hasattr(a, "threads") and a.threads is None:
        a.threads = _default_threads()
    start = time.perf_counter()
    try:
        results, diagnostics, header, rows, ok = HANDLERS[a.command](a)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParameterError as exc:
        print(f"invalid parameter: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NoConvergence, DomainError, QueryBeyondRange, InvsubError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    runtime = time.perf_counter() - start
    if a.embed_runtime:
        diagnostics = dict(diagnostics, runtime_seconds=runtime)
    text = render(a, results, diagnostics, header, rows)
    if a.out:
        with open(a.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"runtime_seconds={runtime:.3f}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_VERIFY


def main():
    sys.exit(run())
