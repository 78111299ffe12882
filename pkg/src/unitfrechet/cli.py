"""Command-line front end.

Subcommands: fit, sample, simulate, quantile, cdf, moments. File-writing
commands (fit, sample, simulate) drop a ``manifest.json`` next to their
outputs recording the command, the resolved options, a SHA-256 digest of
the ingested input and the tool version, so a run can be reproduced and
checked bit for bit. The manifest carries no timestamp on purpose.

Exit codes:

    0   success
    2   usage error (bad flags, invalid parameter values, n <= 0)
    3   ingestion error (unreadable file, non-numeric rows, values
        outside (0, 1), empty input, invalid simulate config)
    4   numerical failure

Output directory resolution: ``--outdir`` flag, else the
``UNITFRECHET_OUTDIR`` environment variable, else the current directory.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .bivariate import BivParams, biv_sample, estimate_cov
from .core import UfParams, uf_cdf, uf_quantile, uf_sample
from .datasets import load_uefa
from .errors import (
    DataError,
    DomainError,
    NumericalError,
    ParameterError,
)
from .inference import (
    DataSeries,
    FitReport,
    describe,
    fit_beta,
    fit_kumaraswamy,
    fit_uf,
    model_handle,
    model_select,
)
from .moments import MomentInputs, approx_moment, approx_var, frechet_moments
from .simulation import PARAM_NAMES, SimConfig, run_study

MODEL_ORDER = ("uf", "beta", "kumaraswamy")
FITTERS = {"uf": fit_uf, "beta": fit_beta, "kumaraswamy": fit_kumaraswamy}
PDF_GRID_SIZE = 401


def _fmt(x: float) -> str:
    """Full-precision decimal serialization; round-trips every double."""
    return "%.17g" % x


def _resolve_outdir(flag_value: Optional[str]) -> Path:
    if flag_value:
        return Path(flag_value)
    env = os.environ.get("UNITFRECHET_OUTDIR")
    return Path(env) if env else Path(".")


def _digest_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _digest_values(values) -> str:
    return _digest_text("\n".join(_fmt(float(v)) for v in values))


def _write_manifest(
    outdir: Path,
    command: str,
    options: dict,
    input_digest: str,
    master_seed: Optional[int] = None,
) -> None:
    doc = {
        "command": command,
        "options": options,
        "input_digest": input_digest,
        "tool_version": __version__,
        "master_seed": master_seed,
    }
    path = outdir / "manifest.json"
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# Ingestion
# ---------------------------------------------------------------------------

def _read_series(source: str, ratio: bool) -> DataSeries:
    """Read a one-column proportion file, or a two-column positive-pair
    file reduced to first/(first+second) when ``ratio`` is set.

    Accepts headerless CSV or a single header row; blank lines are
    skipped. Every complaint carries the 1-based row number.
    """
    if source == "bundled:uefa":
        if ratio:
            raise DataError("bundled:uefa is univariate; --ratio does not apply")
        return load_uefa()
    try:
        text = Path(source).read_text()
    except OSError as exc:
        raise DataError(f"cannot read {source}: {exc.strerror or exc}") from None
    ncols = 2 if ratio else 1
    values: list[float] = []
    seen_data = False
    for rowno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        fields = [f.strip() for f in stripped.split(",")]
        try:
            nums = [float(f) for f in fields]
        except ValueError:
            if not seen_data:
                # single header row is allowed
                seen_data = True
                continue
            raise DataError(f"row {rowno}: non-numeric value {stripped!r}") from None
        seen_data = True
        if len(nums) != ncols:
            raise DataError(
                f"row {rowno}: expected {ncols} column(s), got {len(nums)}"
            )
        if ratio:
            x1, x2 = nums
            if not (math.isfinite(x1) and math.isfinite(x2)):
                raise DataError(f"row {rowno}: non-finite value")
            if x1 <= 0.0 or x2 <= 0.0:
                raise DataError(
                    f"row {rowno}: ratio input needs strictly positive pairs"
                )
            values.append(x1 / (x1 + x2))
        else:
            v = nums[0]
            if not math.isfinite(v):
                raise DataError(f"row {rowno}: non-finite value {stripped!r}")
            if not (0.0 < v < 1.0):
                raise DataError(
                    f"row {rowno}: value {stripped!r} outside the open interval (0, 1)"
                )
            values.append(v)
    if not values:
        raise DataError(f"no data in {source}")
    return DataSeries(tuple(values), source=source)


# ---------------------------------------------------------------------------
# fit
# ---------------------------------------------------------------------------

def _parse_models(csv_arg: str) -> list[str]:
    models = []
    for name in csv_arg.split(","):
        name = name.strip().lower()
        if not name:
            continue
        if name not in MODEL_ORDER:
            raise DomainError(
                f"unknown model {name!r}; choose from {', '.join(MODEL_ORDER)}"
            )
        if name not in models:
            models.append(name)
    if not models:
        raise DomainError("no models requested")
    return models


def _report_lines(report: FitReport) -> list[str]:
    theta = "  ".join(
        f"{name}={value:.10g}"
        for name, value in zip(report.param_names, report.theta_hat)
    )
    rows = [
        ("model", report.model),
        ("n", str(report.n)),
        ("theta_hat", theta),
        ("loglik", f"{report.loglik:.10g}"),
        ("aic", f"{report.aic:.10g}"),
        ("bic", f"{report.bic:.10g}"),
        ("k_params", str(report.k_params)),
        ("ks_stat", f"{report.ks_stat:.10g}"),
        ("ks_pvalue", f"{report.ks_pvalue:.10g}"),
        ("converged", "true" if report.converged else "false"),
        ("boundary_hit", "true" if report.boundary_hit else "false"),
        ("iterations", str(report.iterations)),
        ("message", report.message),
    ]
    return [f"{key:<13} {value}" for key, value in rows]


def _report_json(report: FitReport) -> dict:
    return {
        "model": report.model,
        "n": report.n,
        "param_names": list(report.param_names),
        "theta_hat": list(report.theta_hat),
        "loglik": report.loglik,
        "aic": report.aic,
        "bic": report.bic,
        "k_params": report.k_params,
        "ks_stat": report.ks_stat,
        "ks_pvalue": report.ks_pvalue,
        "converged": report.converged,
        "boundary_hit": report.boundary_hit,
        "iterations": report.iterations,
        "message": report.message,
    }


def _write_report_file(outdir: Path, report: FitReport) -> None:
    lines = _report_lines(report)
    lines.append("")
    lines.append("--- machine readable ---")
    lines.append(json.dumps(_report_json(report), indent=2))
    (outdir / f"report_{report.model}.txt").write_text("\n".join(lines) + "\n")


def _write_csv(path: Path, header: str, rows) -> None:
    lines = [header]
    lines.extend(rows)
    path.write_text("\n".join(lines) + "\n")


def _pdf_grid() -> np.ndarray:
    # 401 interior points; endpoints excluded because several densities
    # here are unbounded at 0 or 1
    return np.arange(1, PDF_GRID_SIZE + 1) / (PDF_GRID_SIZE + 1.0)


def cmd_fit(args: argparse.Namespace) -> int:
    data = _read_series(args.input, args.ratio)
    models = _parse_models(args.models)
    outdir = _resolve_outdir(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    desc = describe(data)
    print("descriptives")
    for key in (
        "n", "mean", "median", "sd", "min", "q1", "q3", "max",
        "skewness", "kurtosis_excess",
    ):
        value = desc[key]
        shown = str(value) if key == "n" else f"{value:.6g}"
        print(f"  {key:<16} {shown}")

    reports = [FITTERS[name](data) for name in models]

    w = data.array
    grid = _pdf_grid()
    for report in reports:
        _write_report_file(outdir, report)
        _write_csv(
            outdir / f"residuals_{report.model}.csv",
            "index,w,residual",
            (
                f"{i + 1},{_fmt(w[i])},{_fmt(report.residuals[i])}"
                for i in range(data.n)
            ),
        )
        if all(math.isfinite(v) for v in report.theta_hat):
            handle = model_handle(report.model, report.theta_hat)
            pdf_vals = np.asarray(handle.pdf(grid), dtype=float)
            cdf_vals = np.asarray(handle.cdf(grid), dtype=float)
            _write_csv(
                outdir / f"plot_pdf_{report.model}.csv",
                "w,pdf",
                (f"{_fmt(g)},{_fmt(p)}" for g, p in zip(grid, pdf_vals)),
            )
            _write_csv(
                outdir / f"plot_cdf_{report.model}.csv",
                "w,cdf",
                (f"{_fmt(g)},{_fmt(c)}" for g, c in zip(grid, cdf_vals)),
            )
            pit = np.sort(np.asarray(handle.cdf(np.sort(w)), dtype=float))
            theo = (np.arange(1, data.n + 1) - 0.5) / data.n
            _write_csv(
                outdir / f"plot_qq_{report.model}.csv",
                "theoretical,sample",
                (f"{_fmt(t)},{_fmt(s)}" for t, s in zip(theo, pit)),
            )

    nbins = int(np.ceil(np.log2(data.n))) + 1 if data.n > 1 else 1
    hist, edges = np.histogram(w, bins=nbins, density=True)
    _write_csv(
        outdir / "plot_hist.csv",
        "bin_left,bin_right,density",
        (
            f"{_fmt(edges[i])},{_fmt(edges[i + 1])},{_fmt(hist[i])}"
            for i in range(nbins)
        ),
    )
    sorted_w = np.sort(w)
    ecdf = np.arange(1, data.n + 1) / data.n
    _write_csv(
        outdir / "plot_ecdf.csv",
        "w,ecdf",
        (f"{_fmt(v)},{_fmt(e)}" for v, e in zip(sorted_w, ecdf)),
    )

    if len(reports) >= 2:
        ranked = model_select(reports).ranked
    else:
        ranked = tuple(reports)
    _write_csv(
        outdir / "comparison.csv",
        "rank,model,k_params,loglik,aic,bic,ks_stat,ks_pvalue,converged,boundary_hit",
        (
            f"{i + 1},{r.model},{r.k_params},{_fmt(r.loglik)},{_fmt(r.aic)},"
            f"{_fmt(r.bic)},{_fmt(r.ks_stat)},{_fmt(r.ks_pvalue)},"
            f"{'true' if r.converged else 'false'},"
            f"{'true' if r.boundary_hit else 'false'}"
            for i, r in enumerate(ranked)
        ),
    )

    print("model ranking (AIC, ties by BIC)")
    for i, r in enumerate(ranked):
        print(
            f"  {i + 1}. {r.model:<12} loglik={r.loglik:.6g}  "
            f"aic={r.aic:.6g}  bic={r.bic:.6g}"
        )

    _write_manifest(
        outdir,
        command="fit",
        options={
            "input": args.input,
            "models": ",".join(models),
            "ratio": bool(args.ratio),
        },
        input_digest=_digest_values(data.values),
    )
    print(f"wrote reports to {outdir}")
    return 0


# ---------------------------------------------------------------------------
# sample
# ---------------------------------------------------------------------------

def cmd_sample(args: argparse.Namespace) -> int:
    if args.n <= 0:
        raise DomainError("n must be a positive integer")
    outdir = _resolve_outdir(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / "sample.csv"
    if args.bivariate:
        if args.sigma1 is None or args.sigma2 is None:
            raise DomainError("--bivariate needs --sigma1 and --sigma2")
        if args.alpha is None or args.rho is None:
            raise DomainError("--bivariate needs --alpha and --rho")
        params = BivParams.of((args.sigma1, args.sigma2, args.alpha, args.rho))
        draws = biv_sample(params, args.n, args.seed)
        _write_csv(
            path,
            "x1,x2",
            (f"{_fmt(a)},{_fmt(b)}" for a, b in draws),
        )
        options = {
            "bivariate": True,
            "sigma1": params.sigma1,
            "sigma2": params.sigma2,
            "alpha": params.alpha,
            "rho": params.rho,
            "n": args.n,
            "seed": args.seed,
        }
    else:
        if args.sigma is None or args.alpha is None or args.rho is None:
            raise DomainError("sample needs --sigma, --alpha and --rho")
        theta = UfParams.of((args.sigma, args.alpha, args.rho))
        draws = uf_sample(theta, args.n, args.seed)
        _write_csv(path, "w", (_fmt(v) for v in draws))
        options = {
            "bivariate": False,
            "sigma": theta.sigma,
            "alpha": theta.alpha,
            "rho": theta.rho,
            "n": args.n,
            "seed": args.seed,
        }
    digest_src = json.dumps(options, sort_keys=True)
    _write_manifest(
        outdir,
        command="sample",
        options=options,
        input_digest=_digest_text(digest_src),
        master_seed=args.seed,
    )
    print(f"wrote {path} (n={args.n})")
    return 0


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def _config_problems(raw) -> tuple[list[str], dict]:
    """Validate the simulate config, reporting every defect by field path."""
    problems: list[str] = []
    clean: dict = {}
    if not isinstance(raw, dict):
        return ["config: expected a JSON object"], clean

    known = {"thetas", "sample_sizes", "replications", "master_seed", "parallelism"}
    for key in raw:
        if key not in known:
            problems.append(f"{key}: unknown field")

    def is_number(v) -> bool:
        return isinstance(v, (int, float)) and not isinstance(v, bool)

    def is_int(v) -> bool:
        return isinstance(v, int) and not isinstance(v, bool)

    if "thetas" not in raw:
        problems.append("thetas: required field")
    elif not isinstance(raw["thetas"], list) or not raw["thetas"]:
        problems.append("thetas: expected a nonempty array")
    else:
        thetas = []
        for i, item in enumerate(raw["thetas"]):
            if not isinstance(item, list) or len(item) != 3 or not all(
                is_number(v) for v in item
            ):
                problems.append(f"thetas[{i}]: expected an array of 3 numbers")
                continue
            sg, al, rh = (float(v) for v in item)
            ok = True
            if not (sg > 0.0 and math.isfinite(sg)):
                problems.append(f"thetas[{i}][0]: sigma must be finite and > 0")
                ok = False
            if not (al > 0.0 and math.isfinite(al)):
                problems.append(f"thetas[{i}][1]: alpha must be finite and > 0")
                ok = False
            if not (0.0 <= rh <= 1.0):
                problems.append(f"thetas[{i}][2]: rho must be in [0, 1]")
                ok = False
            if ok:
                thetas.append((sg, al, rh))
        clean["thetas"] = tuple(thetas)

    if "sample_sizes" in raw:
        if not isinstance(raw["sample_sizes"], list) or not raw["sample_sizes"]:
            problems.append("sample_sizes: expected a nonempty array")
        else:
            sizes = []
            for j, v in enumerate(raw["sample_sizes"]):
                if not is_int(v) or v < 4:
                    problems.append(f"sample_sizes[{j}]: must be an integer >= 4")
                else:
                    sizes.append(int(v))
            clean["sample_sizes"] = tuple(sizes)

    for key, low in (("replications", 1), ("master_seed", 0), ("parallelism", 1)):
        if key in raw:
            v = raw[key]
            if not is_int(v) or v < low:
                problems.append(f"{key}: must be an integer >= {low}")
            else:
                clean[key] = int(v)

    return problems, clean


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        raise DataError(
            f"cannot read {args.config}: {exc.strerror or exc}"
        ) from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"config: invalid JSON: {exc}") from None
    problems, clean = _config_problems(raw)
    if problems:
        raise DataError("\n".join(problems))
    config = SimConfig(**clean)

    report = run_study(config)
    outdir = _resolve_outdir(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    def rows():
        for row in report.iter_rows():
            yield (
                f"{row['theta_index']},{row['n']},{row['param']},"
                f"{_fmt(row['rb'])},{_fmt(row['mse'])},{_fmt(row['rmse'])},"
                f"{row['failures']}"
            )

    _write_csv(
        outdir / "simreport.csv",
        "theta_index,n,param,rb,mse,rmse,failures",
        rows(),
    )
    cells_doc = [
        {
            "theta_index": c.theta_index,
            "theta": list(c.theta),
            "n": c.n,
            "rb": list(c.rb),
            "mse": list(c.mse),
            "rmse": list(c.rmse),
            "failures": c.failure_count,
            "boundary": c.boundary_count,
            "used": c.used,
        }
        for c in report.cells
    ]
    (outdir / "cells.json").write_text(json.dumps(cells_doc, indent=2) + "\n")

    canonical = json.dumps(
        {
            "thetas": [list(t) for t in config.thetas],
            "sample_sizes": list(config.sample_sizes),
            "replications": config.replications,
            "master_seed": config.master_seed,
            "parallelism": config.parallelism,
        },
        sort_keys=True,
    )
    _write_manifest(
        outdir,
        command="simulate",
        options={"config": args.config},
        input_digest=_digest_text(canonical),
        master_seed=config.master_seed,
    )
    print(
        f"wrote {outdir / 'simreport.csv'} "
        f"({len(report.cells)} cells, {config.replications} replications each)"
    )
    return 0


# ---------------------------------------------------------------------------
# quantile / cdf / moments
# ---------------------------------------------------------------------------

def _theta_from_args(args: argparse.Namespace) -> UfParams:
    return UfParams.of((args.sigma, args.alpha, args.rho))


def cmd_quantile(args: argparse.Namespace) -> int:
    if not (0.0 < args.p < 1.0):
        raise DomainError("p must be strictly between 0 and 1")
    print(f"{uf_quantile(args.p, _theta_from_args(args)):.12g}")
    return 0


def cmd_cdf(args: argparse.Namespace) -> int:
    print(f"{uf_cdf(args.w, _theta_from_args(args)):.12g}")
    return 0


def cmd_moments(args: argparse.Namespace) -> int:
    margins_given = args.sigma1 is not None or args.sigma2 is not None
    direct_given = args.mu1 is not None or args.mu2 is not None
    if margins_given and direct_given:
        raise DomainError("give either --sigma1/--sigma2/--alpha/--rho or --mu1/--mu2, not both")
    if direct_given:
        if args.mu1 is None or args.mu2 is None:
            raise DomainError("direct input needs both --mu1 and --mu2")
        inputs = MomentInputs(
            mu1=args.mu1, mu2=args.mu2,
            var1=args.var1, var2=args.var2, cov=args.cov,
        )
    else:
        if args.sigma1 is None or args.sigma2 is None or args.alpha is None:
            raise DomainError("margin input needs --sigma1, --sigma2 and --alpha")
        rho = args.rho if args.rho is not None else 0.0
        params = BivParams.of((args.sigma1, args.sigma2, args.alpha, rho))
        inputs = frechet_moments(params)
        if args.cov is not None:
            inputs = inputs.with_cov(args.cov)
        elif rho == 0.0:
            inputs = inputs.with_cov(0.0)
        elif inputs.var1 is not None:
            if args.seed is None:
                raise DomainError(
                    "rho > 0 without --cov needs Monte Carlo; pass --seed "
                    "(and optionally --mc-n)"
                )
            est = estimate_cov(params, args.mc_n, args.seed)
            inputs = inputs.with_cov(est.value)
            print(f"cov_estimate = {est.value:.12g} (se {est.se:.3g}, n={est.n})",
                  file=sys.stderr)
    if not inputs.complete:
        raise DomainError(
            "moment approximation needs variances and a covariance; "
            "margin shape alpha <= 2 has no finite variance"
        )
    mean = approx_moment(1.0, inputs)
    var = approx_var(inputs)
    print(f"E(W) = {mean:.12g}")
    print(f"Var(W) = {var:.12g}")
    if args.p is not None:
        print(f"E(W^{args.p:g}) = {approx_moment(args.p, inputs):.12g}")
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unitfrechet",
        description="UF distribution: fitting, sampling, moments, simulation.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="fit models to a proportion sample")
    p_fit.add_argument("input", help='data file or "bundled:uefa"')
    p_fit.add_argument(
        "--models", default="uf,beta,kumaraswamy",
        help="comma-separated subset of uf,beta,kumaraswamy",
    )
    p_fit.add_argument(
        "--ratio", action="store_true",
        help="input has two positive columns; analyze first/(first+second)",
    )
    p_fit.add_argument("--outdir", default=None)
    p_fit.set_defaults(func=cmd_fit)

    p_sample = sub.add_parser("sample", help="draw a reproducible sample")
    p_sample.add_argument("--sigma", type=float, default=None)
    p_sample.add_argument("--alpha", type=float, default=None)
    p_sample.add_argument("--rho", type=float, default=None)
    p_sample.add_argument("--bivariate", action="store_true")
    p_sample.add_argument("--sigma1", type=float, default=None)
    p_sample.add_argument("--sigma2", type=float, default=None)
    p_sample.add_argument("-n", type=int, required=True)
    p_sample.add_argument("--seed", type=int, required=True)
    p_sample.add_argument("--outdir", default=None)
    p_sample.set_defaults(func=cmd_sample)

    p_sim = sub.add_parser("simulate", help="run a Monte Carlo estimator study")
    p_sim.add_argument("--config", required=True, help="JSON config file")
    p_sim.add_argument("--outdir", default=None)
    p_sim.set_defaults(func=cmd_simulate)

    p_q = sub.add_parser("quantile", help="evaluate the quantile function")
    p_q.add_argument("-p", type=float, required=True)
    p_q.add_argument("--sigma", type=float, required=True)
    p_q.add_argument("--alpha", type=float, required=True)
    p_q.add_argument("--rho", type=float, required=True)
    p_q.set_defaults(func=cmd_quantile)

    p_c = sub.add_parser("cdf", help="evaluate the CDF")
    p_c.add_argument("-w", type=float, required=True)
    p_c.add_argument("--sigma", type=float, required=True)
    p_c.add_argument("--alpha", type=float, required=True)
    p_c.add_argument("--rho", type=float, required=True)
    p_c.set_defaults(func=cmd_cdf)

    p_m = sub.add_parser("moments", help="approximate E(W) and Var(W)")
    p_m.add_argument("--sigma1", type=float, default=None)
    p_m.add_argument("--sigma2", type=float, default=None)
    p_m.add_argument("--alpha", type=float, default=None)
    p_m.add_argument("--rho", type=float, default=None)
    p_m.add_argument("--mu1", type=float, default=None)
    p_m.add_argument("--mu2", type=float, default=None)
    p_m.add_argument("--var1", type=float, default=None)
    p_m.add_argument("--var2", type=float, default=None)
    p_m.add_argument("--cov", type=float, default=None)
    p_m.add_argument("--mc-n", type=int, default=100000, dest="mc_n")
    p_m.add_argument("--seed", type=int, default=None)
    p_m.add_argument("-p", type=float, default=None,
                     help="also print the approximate p-th moment")
    p_m.set_defaults(func=cmd_moments)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ParameterError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
