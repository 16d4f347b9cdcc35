"""Command-line front end.

Subcommands: ``estimate`` (CSV in, estimator report out), ``simulate``
(sqrt(n)-RMSE experiments), ``ktable`` (the rho -> k grid), ``validate-k``
(k map vs. the Monte Carlo oracle), ``are`` (plug-in efficiency table),
``iris`` (bundled-data reproduction report), and ``exchangeability``
(permutation test).  Exit codes: 0 success, 1 computation error,
2 usage/input error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from io import StringIO

import numpy as np

from . import __version__
from ._backend import BACKEND_NAME
from .affine import FixedPointConfig, _fit_scatter_nd, fit_gini_scatter
from .asymptotics import (
    MomentSet,
    asv_corrected,
    asv_pearson,
    asv_regular_gini,
    asv_symmetric_gini,
    asv_tau_rho,
    influence_kendall,
    influence_pearson,
    influence_rho_g,
)
from .core import (
    BivariateSample,
    CorrelationValue,
    EllipticalModelSpec,
    EstimateEntry,
    EstimateReport,
    ScatterMatrix2,
    validate_sample,
)
from .datasets import IRIS_PAIRS, IRIS_SPECIES, IRIS_VARIABLES, iris_columns
from .elliptic import KGrid, k_of_rho
from .errors import DegenerateSample, GinicorrError, NonConvergence
from .estimators import (
    exchangeability_test,
    gini_regular,
    kendall_tau,
    pearson,
    rho_from_tau,
    symmetric_gini,
)
from .sampling import RngStream
from .simulation import RmseExperimentConfig, are_table, k_oracle, rmse_experiment


class CliInputError(Exception):
    """Bad usage or unreadable/malformed input: exit code 2."""


def _fmt(x) -> str:
    """Shortest round-trip decimal form; identical to JSON's rendering."""
    return repr(float(x))


def _write(text: str, out_path):
    if out_path:
        with open(out_path, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _read_two_columns(path: str, columns: str):
    try:
        with open(path, newline="") as f:
            rows = list(csv.reader(f))
    except OSError as exc:
        raise CliInputError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise CliInputError(f"{path} is empty")
    header = [h.strip() for h in rows[0]]
    names = [c.strip() for c in columns.split(",")]
    if len(names) != 2:
        raise CliInputError("--columns needs exactly two comma-separated selectors")
    idx = []
    for name in names:
        if name in header:
            idx.append(header.index(name))
        elif name.isdigit() and int(name) < len(header):
            idx.append(int(name))
        else:
            raise CliInputError(f"unknown column {name!r}; header is {header}")
    xs, ys = [], []
    for rownum, row in enumerate(rows[1:], start=2):
        if len(row) <= max(idx):
            raise CliInputError(f"row {rownum} is too short")
        try:
            xs.append(float(row[idx[0]]))
            ys.append(float(row[idx[1]]))
        except ValueError as exc:
            raise CliInputError(f"non-numeric cell at row {rownum}: {exc}") from exc
    return xs, ys


def _default_threads() -> int:
    env = os.environ.get("GINICORR_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# estimate
# ---------------------------------------------------------------------------


def _stderr_or_none(fn, *args):
    try:
        return fn(*args)
    except GinicorrError:
        return None


def build_estimate_report(
    sample: BivariateSample, label: str, affine_cfg: FixedPointConfig
) -> EstimateReport:
    n = sample.n
    entries = []

    def add(value: CorrelationValue, asv):
        stderr = None if asv is None else math.sqrt(asv.value / n)
        entries.append(EstimateEntry(value, stderr))

    add(pearson(sample), _stderr_or_none(asv_pearson, sample))
    tau = kendall_tau(sample)
    add(tau, None)
    add(rho_from_tau(tau.value), _stderr_or_none(asv_tau_rho, sample))
    add(gini_regular(sample, "xy"), _stderr_or_none(asv_regular_gini, sample))
    add(gini_regular(sample, "yx"), _stderr_or_none(asv_regular_gini, sample.swapped()))
    add(symmetric_gini(sample), _stderr_or_none(asv_symmetric_gini, sample))
    from .estimators import corrected_symmetric_gini

    add(corrected_symmetric_gini(sample), _stderr_or_none(asv_corrected, sample))

    iterations = residual = None
    try:
        report = fit_gini_scatter(sample, affine_cfg)
    except NonConvergence as exc:
        report = exc.report
    except DegenerateSample:
        report = None
    if report is not None:
        entries.append(
            EstimateEntry(CorrelationValue(report.sigma.correlation(), "affine_symmetric_gini"))
        )
        iterations = report.iterations
        residual = report.final_residual
    return EstimateReport(label, n, tuple(entries), iterations, residual)


def _report_json(report: EstimateReport) -> str:
    payload = {
        "dataset": report.dataset,
        "n": report.n,
        "estimates": [
            {"estimator": e.value.estimator, "value": e.value.value}
            | ({"stderr": e.stderr} if e.stderr is not None else {})
            for e in report.estimates
        ],
        "diagnostics": {
            "affine_iterations": report.affine_iterations,
            "affine_residual": report.affine_residual,
            "backend": BACKEND_NAME,
        },
    }
    return json.dumps(payload, indent=2) + "\n"


def _report_csv(report: EstimateReport) -> str:
    buf = StringIO()
    buf.write("estimator,value,stderr,affine_iterations,affine_residual\n")
    for e in report.estimates:
        stderr = "" if e.stderr is None else _fmt(e.stderr)
        if e.value.estimator == "affine_symmetric_gini" and report.affine_iterations is not None:
            extra = f"{report.affine_iterations},{_fmt(report.affine_residual)}"
        else:
            extra = ","
        buf.write(f"{e.value.estimator},{_fmt(e.value.value)},{stderr},{extra}\n")
    return buf.getvalue()


def _parse_grid_spec(text: str):
    try:
        xpart, ypart = text.split(",")
        x0, x1, nx = xpart.split(":")
        y0, y1, ny = ypart.split(":")
        return float(x0), float(x1), int(nx), float(y0), float(y1), int(ny)
    except ValueError as exc:
        raise CliInputError(
            "--if-grid expects 'xmin:xmax:nx,ymin:ymax:ny'"
        ) from exc


def _if_grid_rows(sample: BivariateSample, spec_text: str):
    x0, x1, nx, y0, y1, ny = _parse_grid_spec(spec_text)
    if nx < 2 or ny < 2:
        raise CliInputError("--if-grid needs at least 2 points per axis")
    m = MomentSet.from_sample(sample)
    rows = []
    for gx in np.linspace(x0, x1, nx):
        for gy in np.linspace(y0, y1, ny):
            point = (float(gx), float(gy))
            rows.append(
                (
                    point[0],
                    point[1],
                    influence_pearson(point, m.mean_x, m.mean_y, m.sigma20, m.sigma02, m.sigma11),
                    influence_rho_g(point, sample),
                    influence_kendall(point, sample),
                )
            )
    return rows


def _cmd_estimate(args) -> int:
    xs, ys = _read_two_columns(args.input, args.columns)
    sample = validate_sample(xs, ys)
    label = args.label or os.path.basename(args.input)
    if args.if_grid:
        rows = _if_grid_rows(sample, args.if_grid)
        if args.output == "json":
            payload = [
                {"x": r[0], "y": r[1], "if_pearson": r[2], "if_symmetric_gini": r[3], "if_kendall": r[4]}
                for r in rows
            ]
            _write(json.dumps(payload, indent=2) + "\n", args.out)
        else:
            buf = StringIO()
            buf.write("x,y,if_pearson,if_symmetric_gini,if_kendall\n")
            for r in rows:
                buf.write(",".join(_fmt(v) for v in r) + "\n")
            _write(buf.getvalue(), args.out)
        return 0
    cfg = FixedPointConfig(args.tolerance, args.max_iterations)
    report = build_estimate_report(sample, label, cfg)
    text = _report_json(report) if args.output == "json" else _report_csv(report)
    _write(text, args.out)
    return 0


# ---------------------------------------------------------------------------
# simulate / are / validate-k / ktable
# ---------------------------------------------------------------------------


def _model_from_args(args) -> EllipticalModelSpec:
    nu = getattr(args, "nu", None)
    if args.dist == "t" and nu is None:
        raise CliInputError("--dist t requires --nu")
    rho = getattr(args, "rho", 0.0)
    return EllipticalModelSpec(
        args.dist, np.zeros(2), ScatterMatrix2.homogeneous(rho), nu if args.dist == "t" else None
    )


def _cmd_simulate(args) -> int:
    spec = _model_from_args(args)
    estimators = tuple(t.strip() for t in args.estimators.split(",") if t.strip())
    config = RmseExperimentConfig(
        spec=spec,
        n=args.n,
        replicates=args.replicates,
        estimators=estimators,
        master_seed=args.seed,
        true_rho=args.rho,
        batches=args.batches,
        affine_config=FixedPointConfig(args.tolerance, args.max_iterations),
    )
    table = rmse_experiment(config, workers=args.threads)
    _write(table.to_json() + "\n" if args.output == "json" else table.to_csv(), args.out)
    return 0


def _cmd_are(args) -> int:
    spec = _model_from_args(args)
    rhos = [float(r) for r in args.rhos.split(",")]
    rows = are_table(spec, rhos, n_mc=args.n_mc, master_seed=args.seed)
    if args.output == "json":
        payload = [
            {
                "rho": r.rho,
                "asv_pearson": r.asv_pearson.value,
                "asv_corrected_gini": r.asv_corrected.value,
                "asv_regular_gini": r.asv_regular_gini.value,
                "asv_tau_rho": r.asv_tau_rho.value,
                "are_corrected_pearson": r.are_corrected,
                "are_regular_pearson": r.are_regular_gini,
                "are_tau_pearson": r.are_tau_rho,
                "pearson_heavy_tail": r.asv_pearson.heavy_tail_warning,
            }
            for r in rows
        ]
        _write(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        buf = StringIO()
        buf.write(
            "rho,asv_pearson,asv_corrected_gini,asv_regular_gini,asv_tau_rho,"
            "are_corrected_pearson,are_regular_pearson,are_tau_pearson,pearson_heavy_tail\n"
        )
        for r in rows:
            buf.write(
                f"{_fmt(r.rho)},{_fmt(r.asv_pearson.value)},{_fmt(r.asv_corrected.value)},"
                f"{_fmt(r.asv_regular_gini.value)},{_fmt(r.asv_tau_rho.value)},"
                f"{_fmt(r.are_corrected)},{_fmt(r.are_regular_gini)},{_fmt(r.are_tau_rho)},"
                f"{int(r.asv_pearson.heavy_tail_warning)}\n"
            )
        _write(buf.getvalue(), args.out)
    return 0


def _cmd_validate_k(args) -> int:
    rhos = [float(r) for r in args.rhos.split(",")]
    buf = StringIO()
    buf.write("rho,k_rho,oracle,oracle_se,abs_diff,within_3se\n")
    ok = True
    for i, rho in enumerate(rhos):
        kv = k_of_rho(rho)
        est, se = k_oracle(rho, args.pairs, RngStream(args.seed, i))
        diff = abs(kv - est)
        within = diff <= 3.0 * se
        ok = ok and within
        buf.write(
            f"{_fmt(rho)},{_fmt(kv)},{_fmt(est)},{_fmt(se)},{_fmt(diff)},{int(within)}\n"
        )
    _write(buf.getvalue(), args.out)
    return 0 if ok else 1


def _cmd_ktable(args) -> int:
    grid = KGrid.build(args.step)
    buf = StringIO()
    buf.write("rho,k_rho\n")
    for r, k in zip(grid.rho_values, grid.k_values):
        buf.write(f"{_fmt(r)},{_fmt(k)}\n")
    _write(buf.getvalue(), args.out)
    return 0


# ---------------------------------------------------------------------------
# iris / exchangeability
# ---------------------------------------------------------------------------


def _iris_species_list(species: str):
    if species == "all":
        return IRIS_SPECIES
    if species not in IRIS_SPECIES:
        raise CliInputError(f"unknown species {species!r}")
    return (species,)


def _parse_pair(pair: str):
    names = tuple(p.strip() for p in pair.split(","))
    if len(names) != 2 or any(n not in IRIS_VARIABLES for n in names):
        raise CliInputError(f"--pair needs two of {IRIS_VARIABLES}")
    return names


def iris_summary_rows():
    """Mean and sample SD (divisor n-1) per variable, overall and by species."""
    rows = []
    for scope in ("all",) + IRIS_SPECIES:
        cols = iris_columns(scope)
        for var in IRIS_VARIABLES:
            v = cols[var]
            rows.append((var, scope, float(np.mean(v)), float(np.std(v, ddof=1))))
    return rows


def iris_correlation_rows(species: str = "all", pair=None, affine_cfg=None):
    """One row per (species, variable pair) with all published estimators.

    The affine correlation comes from one scatter fit per species over
    all four variables, which is how the published per-pair values were
    produced; tied ranks in tau and the regular Gini are resolved the
    way the published table resolves them.
    """
    cfg = affine_cfg or FixedPointConfig()
    pairs = (pair,) if pair else IRIS_PAIRS
    rows = []
    for sp in _iris_species_list(species):
        cols = iris_columns(sp)
        pts = np.column_stack([cols[v] for v in IRIS_VARIABLES])
        try:
            s, _, _, _ = _fit_scatter_nd(pts, cfg.tolerance, cfg.max_iterations)
        except DegenerateSample:
            s = None
        for va, vb in pairs:
            sample = validate_sample(cols[va], cols[vb])
            ia, ib = IRIS_VARIABLES.index(va), IRIS_VARIABLES.index(vb)
            affine = (
                float(s[ia, ib] / math.sqrt(s[ia, ia] * s[ib, ib])) if s is not None else math.nan
            )
            rows.append(
                {
                    "species": sp,
                    "pair": f"{va},{vb}",
                    "pearson": pearson(sample).value,
                    "kendall_tau": kendall_tau(sample).value,
                    "affine_gini": affine,
                    "gini_xy": gini_regular(sample, "xy", ties="break_by_order").value,
                    "gini_yx": gini_regular(sample, "yx", ties="break_by_order").value,
                }
            )
    return rows


def _cmd_iris(args) -> int:
    if args.summary:
        rows = iris_summary_rows()
        if args.output == "json":
            payload = [
                {"variable": v, "scope": s, "mean": m, "sd": sd} for v, s, m, sd in rows
            ]
            _write(json.dumps(payload, indent=2) + "\n", args.out)
        else:
            buf = StringIO()
            buf.write("variable,scope,mean,sd\n")
            for v, s, m, sd in rows:
                buf.write(f"{v},{s},{_fmt(m)},{_fmt(sd)}\n")
            _write(buf.getvalue(), args.out)
        return 0
    pair = _parse_pair(args.pair) if args.pair else None
    cfg = FixedPointConfig(args.tolerance, args.max_iterations)
    rows = iris_correlation_rows(args.species, pair, cfg)
    if args.output == "json":
        _write(json.dumps(rows, indent=2) + "\n", args.out)
    else:
        buf = StringIO()
        buf.write("species,pair,pearson,kendall_tau,affine_gini,gini_xy,gini_yx\n")
        for r in rows:
            buf.write(
                f"{r['species']},\"{r['pair']}\",{_fmt(r['pearson'])},{_fmt(r['kendall_tau'])},"
                f"{_fmt(r['affine_gini'])},{_fmt(r['gini_xy'])},{_fmt(r['gini_yx'])}\n"
            )
        _write(buf.getvalue(), args.out)
    return 0


def _cmd_exchangeability(args) -> int:
    if args.input:
        xs, ys = _read_two_columns(args.input, args.columns)
        sample = validate_sample(xs, ys)
        label = os.path.basename(args.input)
    elif args.iris_species:
        if not args.pair:
            raise CliInputError("--iris-species requires --pair")
        va, vb = _parse_pair(args.pair)
        cols = iris_columns(args.iris_species)
        sample = validate_sample(cols[va], cols[vb])
        label = f"iris:{args.iris_species}:{va},{vb}"
    else:
        raise CliInputError("need --input with --columns, or --iris-species with --pair")
    result = exchangeability_test(sample, args.permutations, args.seed)
    if args.output == "json":
        payload = {
            "dataset": label,
            "n": sample.n,
            "statistic": result.statistic,
            "p_value": result.p_value,
            "n_permutations": result.n_permutations,
            "seed": result.seed,
        }
        _write(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        buf = StringIO()
        buf.write("dataset,n,statistic,p_value,n_permutations,seed\n")
        buf.write(
            f"{label},{sample.n},{_fmt(result.statistic)},{_fmt(result.p_value)},"
            f"{result.n_permutations},{result.seed}\n"
        )
        _write(buf.getvalue(), args.out)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_output_args(p):
    p.add_argument("--output", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ginicorr", description=__doc__)
    parser.add_argument("--version", action="version", version=f"ginicorr {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="estimator report for a two-column CSV dataset")
    p.add_argument("--input", required=True)
    p.add_argument("--columns", required=True, help="two column names or 0-based indices, comma separated")
    p.add_argument("--label")
    p.add_argument("--tolerance", type=float, default=1e-10)
    p.add_argument("--max-iterations", type=int, default=200)
    p.add_argument("--if-grid", help="emit influence surfaces on 'xmin:xmax:nx,ymin:ymax:ny'")
    p.add_argument("--output", choices=("csv", "json"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("simulate", help="sqrt(n)-RMSE Monte Carlo experiment")
    p.add_argument("--dist", choices=("normal", "t", "kotz"), default="normal")
    p.add_argument("--nu", type=float)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--replicates", type=int, required=True)
    p.add_argument(
        "--estimators",
        default="pearson,tau_to_rho,gini_xy,corrected_symmetric_gini",
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--batches", type=int, default=1)
    p.add_argument("--threads", type=int, default=_default_threads())
    p.add_argument("--tolerance", type=float, default=1e-10)
    p.add_argument("--max-iterations", type=int, default=200)
    _add_output_args(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("ktable", help="emit the rho -> k(rho) grid as CSV")
    p.add_argument("--step", type=float, default=1e-4)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_ktable, output="csv")

    p = sub.add_parser("validate-k", help="compare k(rho) against the Monte Carlo oracle")
    p.add_argument("--rhos", default="0.1,0.3,0.5,0.7,0.9")
    p.add_argument("--pairs", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_validate_k)

    p = sub.add_parser("are", help="plug-in asymptotic relative efficiency table")
    p.add_argument("--dist", choices=("normal", "t", "kotz"), default="normal")
    p.add_argument("--nu", type=float)
    p.add_argument("--rhos", default="0.1,0.5,0.9")
    p.add_argument("--n-mc", type=int, default=20000)
    p.add_argument("--seed", type=int, default=0)
    _add_output_args(p)
    p.set_defaults(func=_cmd_are, rho=0.0)

    p = sub.add_parser("iris", help="bundled iris reproduction report")
    p.add_argument("--species", default="all", choices=("all",) + IRIS_SPECIES)
    p.add_argument("--pair", help="e.g. sepal_length,sepal_width")
    p.add_argument("--summary", action="store_true", help="means and SDs instead of correlations")
    p.add_argument("--tolerance", type=float, default=1e-10)
    p.add_argument("--max-iterations", type=int, default=200)
    _add_output_args(p)
    p.set_defaults(func=_cmd_iris)

    p = sub.add_parser("exchangeability", help="permutation test of column exchangeability")
    p.add_argument("--input")
    p.add_argument("--columns")
    p.add_argument("--iris-species", choices=IRIS_SPECIES)
    p.add_argument("--pair")
    p.add_argument("--permutations", type=int, default=9999)
    p.add_argument("--seed", type=int, default=0)
    _add_output_args(p)
    p.set_defaults(func=_cmd_exchangeability)

    return parser


def run_cli(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CliInputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except GinicorrError as exc:
        print(f"error[{type(exc).__name__}]: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))
