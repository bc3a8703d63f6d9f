"""Command-line frontend.

Subcommands:

* ``simulate``  -- draw a benchmark dataset, write it as CSV plus a manifest.
* ``profile``   -- sweep a transformation family over a grid and write the
  curve as CSV plus a summary JSON.
* ``compare``   -- log-likelihood ratio between two targets, as JSON.
* ``correlate`` -- correlations of the response with each transformed
  version, as CSV and an aligned text table.

Target specs use the grammar ``name[:key=value,...]``, e.g. ``gaussian``,
``uniform``, ``logistic``, ``t:nu=6.67``, ``t:inv_nu=0.15``,
``alpha:a=-0.05,b=-0.05``.

Exit codes: 0 success, 2 usage error, 3 domain/data error, 4 numeric
failure, 1 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .errors import DomainError, NumericError
from .linmodel import DesignSpec, ModelKind, fit
from .simdesign import SimConfig, simulate
from .targetdist import AlphaBeta, Gaussian, Logistic, StudentT, Uniform
from .translik import (
    DEFAULT_ALPHA_GRID,
    DEFAULT_BOXCOX_GRID,
    DEFAULT_T_GRID,
    boxcox_profile,
    correlation_report,
    loglik_ratio,
    lr_diagnostics_gaussian_uniform,
    profile_alpha,
    profile_student_t,
    reduced_profile_loglik,
)

TARGET_GRAMMAR = (
    "target spec grammar: name[:key=value,...] where name is one of "
    "gaussian | uniform | logistic | t | alpha; "
    "t takes nu=<real >= 1> or inv_nu=<real in [0,1]>; "
    "alpha takes a=<real in [-1,1]>, b=<real in [-1,1]> (b defaults to a)"
)


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    return format(float(x), ".17g")


def parse_target(spec: str):
    spec = spec.strip()
    name, _, rest = spec.partition(":")
    name = name.strip().lower()
    params = {}
    if rest:
        for item in rest.split(","):
            key, eq, value = item.partition("=")
            if not eq:
                raise UsageError(f"malformed parameter {item!r} in target {spec!r}")
            try:
                params[key.strip().lower()] = float(value)
            except ValueError:
                raise UsageError(f"non-numeric value in target {spec!r}") from None
    try:
        if name == "gaussian":
            dist = Gaussian()
        elif name == "uniform":
            dist = Uniform()
        elif name == "logistic":
            dist = Logistic()
        elif name in ("t", "student_t"):
            if "inv_nu" in params:
                dist = StudentT(params.pop("inv_nu"))
            elif "nu" in params:
                dist = StudentT.from_nu(params.pop("nu"))
            else:
                raise UsageError(f"target {spec!r} needs nu= or inv_nu=")
        elif name in ("alpha", "alpha_beta"):
            if "a" not in params and "alpha" not in params:
                raise UsageError(f"target {spec!r} needs a=")
            a = params.pop("a", None)
            if a is None:
                a = params.pop("alpha")
            b = params.pop("b", params.pop("beta", a))
            dist = AlphaBeta(a, b)
        else:
            raise UsageError(f"unknown target {name!r}")
    except DomainError as exc:
        raise UsageError(f"invalid parameters in target {spec!r}: {exc}") from None
    if params:
        raise UsageError(f"unknown parameters {sorted(params)} in target {spec!r}")
    return dist


def parse_target_list(text: str):
    """Split a comma-separated list of target specs.

    Commas also separate key=value pairs inside a spec, so a token that
    contains '=' but no ':' continues the previous spec.
    """
    specs = []
    for token in text.split(","):
        if "=" in token and ":" not in token and specs:
            specs[-1] += "," + token
        else:
            specs.append(token)
    specs = [s for s in (s.strip() for s in specs) if s]
    if not specs:
        raise UsageError("empty target list")
    return [parse_target(s) for s in specs]


def _manifest(command: str, config: dict, seed=None) -> dict:
    return {
        "command": command,
        "config": config,
        "tool_version": __version__,
        "seed": seed,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }


def _write_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def read_data_csv(path):
    """Read a data file (columns index,row,col,y) back into vectors."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["index", "row", "col", "y"]:
            raise DomainError(f"{path}: expected header index,row,col,y")
        recs = []
        for lineno, fields in enumerate(reader, start=2):
            if not fields:
                continue
            try:
                recs.append((int(fields[0]), int(fields[1]), int(fields[2]), float(fields[3])))
            except (ValueError, IndexError):
                raise DomainError(f"{path}:{lineno}: malformed row") from None
    if not recs:
        raise DomainError(f"{path}: no data rows")
    recs.sort(key=lambda rec: rec[0])
    idx = np.array([rec[0] for rec in recs])
    if not np.array_equal(idx, np.arange(len(recs))):
        raise DomainError(f"{path}: index column must be 0..n-1 without gaps")
    rows = np.array([rec[1] for rec in recs])
    cols = np.array([rec[2] for rec in recs])
    y = np.array([rec[3] for rec in recs])
    design = DesignSpec(
        nrows=int(rows.max()) + 1,
        ncols=int(cols.max()) + 1,
        row_index=rows,
        col_index=cols,
    )
    return y, design


def cmd_simulate(args) -> int:
    config = SimConfig(
        nrows=args.nrows, ncols=args.ncols, effect_dist=args.effects,
        intercept=args.intercept, noise_sd=args.noise_sd, seed=args.seed,
    )
    out = simulate(config)
    rows_idx, cols_idx = out.design.rows_cols()
    _write_csv(
        args.out,
        ["index", "row", "col", "y"],
        (
            [str(k), str(int(rows_idx[k])), str(int(cols_idx[k])), _fmt(out.y[k])]
            for k in range(out.design.n)
        ),
    )
    _write_json(args.out + ".manifest.json", _manifest(
        "simulate",
        {
            "nrows": config.nrows, "ncols": config.ncols,
            "effects": config.effect_dist, "intercept": config.intercept,
            "noise_sd": config.noise_sd, "out": args.out,
        },
        seed=config.seed,
    ))
    return 0


def _grid_from_args(args, default):
    given = [args.grid_start is not None, args.grid_stop is not None,
             args.grid_step is not None]
    if not any(given):
        return default
    if not all(given):
        raise UsageError("--grid-start, --grid-stop and --grid-step must be given together")
    if args.grid_step <= 0 or args.grid_stop < args.grid_start:
        raise UsageError("grid must have positive step and stop >= start")
    count = int(math.floor((args.grid_stop - args.grid_start) / args.grid_step + 1e-9)) + 1
    return args.grid_start + args.grid_step * np.arange(count)


def cmd_profile(args) -> int:
    y, design = read_data_csv(args.input)
    design = design.with_model(ModelKind(args.model))
    defaults = {
        "t": DEFAULT_T_GRID, "alpha": DEFAULT_ALPHA_GRID, "boxcox": DEFAULT_BOXCOX_GRID,
    }
    grid = _grid_from_args(args, defaults[args.family])
    if args.family == "t":
        curve = profile_student_t(y, design, grid, refine=args.refine)
        comparators = {
            "gaussian_value": reduced_profile_loglik(y, Gaussian(), design).value,
        }
    elif args.family == "alpha":
        curve = profile_alpha(y, design, grid, refine=args.refine)
        t_curve = profile_student_t(y, design, refine=args.refine)
        comparators = {
            "gaussian_value": reduced_profile_loglik(y, Gaussian(), design).value,
            "logistic_value": reduced_profile_loglik(y, Logistic(), design).value,
            "t_family_argmax": {
                "inv_nu": t_curve.argmax_param,
                "value": t_curve.argmax_value,
            },
        }
    else:
        if args.refine:
            raise UsageError("--refine is not supported for the boxcox family")
        curve = boxcox_profile(y, design, grid)
        # The g = 1 transform is affine, so its profile value is the plain
        # identity fit (the jacobian coefficient g - 1 vanishes).
        comparators = {
            "identity_value": -0.5 * fit(y, design).log_det_sigma_hat,
        }

    def cell(v):
        return _fmt(v) if np.isfinite(v) else ""

    _write_csv(
        args.out,
        ["param", "value", "det_term", "jacobian_term"],
        (
            [_fmt(curve.grid[i]), cell(curve.values[i]),
             cell(curve.det_terms[i]), cell(curve.jacobian_terms[i])]
            for i in range(curve.grid.size)
        ),
    )
    summary = {
        "family": args.family,
        "model": design.model.value,
        "n": int(design.n),
        "argmax_param": curve.argmax_param,
        "argmax_value": curve.argmax_value,
        "comparators": comparators,
        "warnings": list(curve.warnings),
        "manifest": _manifest("profile", {
            "input": args.input, "family": args.family, "model": args.model,
            "grid_start": float(curve.grid[0]), "grid_stop": float(curve.grid[-1]),
            "grid_points": int(curve.grid.size), "refine": bool(args.refine),
            "out": args.out,
        }),
    }
    _write_json(args.summary or args.out + ".summary.json", summary)
    return 0


def cmd_compare(args) -> int:
    y, design = read_data_csv(args.input)
    design = design.with_model(ModelKind(args.model))
    dist_a = parse_target(args.a)
    dist_b = parse_target(args.b)
    side_a = reduced_profile_loglik(y, dist_a, design)
    side_b = reduced_profile_loglik(y, dist_b, design)
    report = {
        "lr": side_a.value - side_b.value,
        "a": {
            "label": side_a.target_label, "det_term": side_a.det_term,
            "jacobian_term": side_a.jacobian_term, "value": side_a.value,
        },
        "b": {
            "label": side_b.target_label, "det_term": side_b.det_term,
            "jacobian_term": side_b.jacobian_term, "value": side_b.value,
        },
    }
    kinds = {dist_a.kind, dist_b.kind}
    entropy_a, entropy_b = dist_a.entropy(), dist_b.entropy()
    n = design.n
    if entropy_a is not None and entropy_b is not None:
        # Replace each jacobian term by n times the target's entropy.
        report["entropy_approximation"] = {
            "jacobian_a": n * entropy_a,
            "jacobian_b": n * entropy_b,
            "lr": (side_a.det_term - side_b.det_term) + n * (entropy_a - entropy_b),
        }
    if kinds == {"gaussian", "uniform"}:
        diag = lr_diagnostics_gaussian_uniform(y, design)
        report["gaussian_uniform_diagnostics"] = {
            "orientation": "gaussian_minus_uniform",
            "det_term": diag.det_term,
            "det_term_linear": diag.det_term_linear,
            "correction_term": diag.correction_term,
            "correction_linear": diag.correction_linear,
            "lr": diag.lr,
        }
    report["manifest"] = _manifest("compare", {
        "input": args.input, "a": args.a, "b": args.b, "model": args.model,
    })
    text = json.dumps(report, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text + "\n")
    print(text)
    return 0


def cmd_correlate(args) -> int:
    y, design = read_data_csv(args.input)
    dists = parse_target_list(args.targets)
    report = correlation_report(y, dists)
    if args.out:
        _write_csv(
            args.out,
            ["target", "correlation"],
            ([label, _fmt(c)] for label, c in zip(report.labels, report.correlations)),
        )
        _write_json(args.out + ".manifest.json", _manifest("correlate", {
            "input": args.input, "targets": args.targets, "out": args.out,
        }))
    width = max(len(label) for label in report.labels)
    for label, c in zip(report.labels, report.correlations):
        print(f"{label:<{width}}  {c:8.4f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmatch",
        description="Select quantile-matching transformations by profile log likelihood.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate a row-column benchmark dataset")
    p.add_argument("--nrows", type=int, default=50)
    p.add_argument("--ncols", type=int, default=30)
    p.add_argument("--effects", choices=["gaussian", "cauchy"], default="gaussian")
    p.add_argument("--intercept", type=float, default=5.0)
    p.add_argument("--noise-sd", type=float, default=1.0)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("profile", help="profile a transformation family over a grid")
    p.add_argument("--family", choices=["t", "alpha", "boxcox"], required=True)
    p.add_argument("--model", choices=["fixed", "random"], default="fixed")
    p.add_argument("--input", required=True)
    p.add_argument("--grid-start", type=float)
    p.add_argument("--grid-stop", type=float)
    p.add_argument("--grid-step", type=float)
    p.add_argument("--refine", action="store_true")
    p.add_argument("--out", required=True)
    p.add_argument("--summary", help="summary JSON path (default: <out>.summary.json)")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("compare", help="log-likelihood ratio between two targets")
    p.add_argument("--a", required=True, help="target spec, e.g. t:nu=6.67")
    p.add_argument("--b", required=True)
    p.add_argument("--model", choices=["fixed", "random"], default="fixed")
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("correlate", help="correlation of y with its transformed versions")
    p.add_argument("--input", required=True)
    p.add_argument("--targets", required=True, help="comma-separated target specs")
    p.add_argument("--out")
    p.set_defaults(func=cmd_correlate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(TARGET_GRAMMAR, file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 4
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
