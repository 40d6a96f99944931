"""Command-line front end: fit models, optimize reliability, run the full
pipeline, and generate synthetic datasets.

Exit codes: 0 success, 1 runtime or data error, 2 usage error. Repeated
invocations with the same arguments and input bytes produce byte-identical
outputs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .data import (
    DEFAULT_SEED,
    Bounds,
    MissingPolicy,
    compute_bounds,
    generate_synthetic,
    load_dataset,
    save_dataset,
)
from .errors import (
    InvalidDimensionsError,
    ReliOptError,
    UnknownLabelColumnError,
)
from .logistic import fit, load_model, model_to_json, save_model
from .pipeline import (
    DEFAULT_DISTINCTNESS_RADIUS,
    DEFAULT_N_PRESCRIPTIONS,
    DEFAULT_N_RUNS,
    PipelineConfig,
    PrescriptionReport,
    optimize_reliability,
    report_to_json,
    run_pipeline,
)
from .pso import SwarmConfig

SEED_ENV_VAR = "RELIOPT_SEED"

DEFAULT_POP = 30
DEFAULT_ITERS = 200

_CONFIG_KEYS = {"data", "label", "missing", "out", "swarm", "pipeline"}
_CONFIG_SWARM_KEYS = {
    "pop",
    "iters",
    "c1",
    "c2",
    "w_start",
    "w_end",
    "velocity_clamp_fraction",
    "scalar_rand",
}
_CONFIG_PIPELINE_KEYS = {"runs", "seed", "prescriptions", "radius"}


class _UsageError(Exception):
    """Bad arguments or config file; maps to exit code 2."""


def _load_config_file(path: Path) -> dict:
    if not path.exists():
        raise FileNotFoundError(f"no such config file: {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise _UsageError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(payload, dict):
        raise _UsageError(f"{path}: config must be a JSON object")
    unknown = set(payload) - _CONFIG_KEYS
    if unknown:
        raise _UsageError(f"{path}: unknown config key(s): {', '.join(sorted(unknown))}")
    for section, allowed in (("swarm", _CONFIG_SWARM_KEYS), ("pipeline", _CONFIG_PIPELINE_KEYS)):
        block = payload.get(section)
        if block is None:
            continue
        if not isinstance(block, dict):
            raise _UsageError(f"{path}: {section!r} must be a JSON object")
        unknown = set(block) - allowed
        if unknown:
            raise _UsageError(
                f"{path}: unknown {section} key(s): {', '.join(sorted(unknown))}"
            )
    missing = payload.get("missing")
    if missing is not None and missing not in ("mean", "reject"):
        raise _UsageError(f"{path}: missing policy must be 'mean' or 'reject', got {missing!r}")
    return payload


def _env_seed() -> int:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise _UsageError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}") from None


def _pick(args: argparse.Namespace, name: str, config_value, default):
    """Flag wins over config wins over default; conflicts are logged."""
    flag_value = getattr(args, name, None)
    if flag_value is not None:
        if config_value is not None and str(config_value) != str(flag_value):
            print(
                f"note: --{name.replace('_', '-')}={flag_value} overrides "
                f"config value {config_value}",
                file=sys.stderr,
            )
        return flag_value
    if config_value is not None:
        return config_value
    return default


def _dataset_settings(args: argparse.Namespace, config: dict) -> tuple[Path, str, MissingPolicy]:
    data = _pick(args, "data", config.get("data"), None)
    label = _pick(args, "label", config.get("label"), None)
    missing = _pick(args, "missing", config.get("missing"), "mean")
    if data is None:
        raise _UsageError("--data is required (flag or config file)")
    if label is None:
        raise _UsageError("--label is required (flag or config file)")
    return Path(data), str(label), MissingPolicy(missing)


def _pipeline_config(args: argparse.Namespace, config: dict) -> PipelineConfig:
    swarm_cfg = config.get("swarm") or {}
    pipe_cfg = config.get("pipeline") or {}
    swarm = SwarmConfig(
        population_size=int(_pick(args, "pop", swarm_cfg.get("pop"), DEFAULT_POP)),
        max_iterations=int(_pick(args, "iters", swarm_cfg.get("iters"), DEFAULT_ITERS)),
        seed=0,  # replaced per run by the ensemble
        c1=float(_pick(args, "c1", swarm_cfg.get("c1"), 2.0)),
        c2=float(_pick(args, "c2", swarm_cfg.get("c2"), 2.0)),
        w_start=float(_pick(args, "w_start", swarm_cfg.get("w_start"), 0.9)),
        w_end=float(_pick(args, "w_end", swarm_cfg.get("w_end"), 0.4)),
        velocity_clamp_fraction=float(swarm_cfg.get("velocity_clamp_fraction", 1.0)),
        scalar_rand=bool(swarm_cfg.get("scalar_rand", False)),
    )
    try:
        return PipelineConfig(
            swarm=swarm,
            n_runs=int(_pick(args, "runs", pipe_cfg.get("runs"), DEFAULT_N_RUNS)),
            base_seed=int(_pick(args, "seed", pipe_cfg.get("seed"), _env_seed())),
            n_prescriptions=int(
                _pick(args, "prescriptions", pipe_cfg.get("prescriptions"), DEFAULT_N_PRESCRIPTIONS)
            ),
            distinctness_radius=float(
                _pick(args, "radius", pipe_cfg.get("radius"), DEFAULT_DISTINCTNESS_RADIUS)
            ),
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def format_vector(values, decimals: int = 3) -> str:
    return "[" + ", ".join(f"{float(v):.{decimals}f}" for v in values) + "]"


def render_report_table(report: PrescriptionReport) -> str:
    """Human-readable summary: settings echo, corner optimum, then one row
    per prescription with the solution vector and its reliability, both at
    three decimals."""
    cfg = report.config
    lines = [
        f"Financial ratios: {report.model.n_features}   "
        f"Population size: {cfg.swarm.population_size}   "
        f"Maximum iterations: {cfg.swarm.max_iterations}   "
        f"Runs: {cfg.n_runs}",
        f"Corner optimum reliability: {report.corner.value:.3f} "
        f"at {format_vector(report.corner.position)}",
        "",
        "Near-optimal prescriptions:",
    ]
    if report.prescriptions:
        width = max(len(format_vector(p.position)) for p in report.prescriptions)
        lines.append(f"  {'#':>2}  {'Solution vector':<{width}}  Reliability")
        for i, prescription in enumerate(report.prescriptions, start=1):
            lines.append(
                f"  {i:>2}  {format_vector(prescription.position):<{width}}  "
                f"{prescription.reliability:.3f}"
            )
    else:
        lines.append("  (none found)")
    for warning in report.warnings:
        lines.append(f"warning: {warning}")
    return "\n".join(lines) + "\n"


def _render_fit_summary(model, report, dataset) -> str:
    lines = [
        f"Fitted reliability model on {dataset.n_rows} banks, {dataset.n_features} ratios",
        f"  converged: {'yes' if report.converged else 'NO'} "
        f"({report.iterations} iterations, max |gradient| {report.max_abs_gradient:.3g})",
        f"  log-likelihood: {report.final_log_likelihood:.6f}",
        f"  {'(intercept)':<24} {model.beta[0]: .6g}",
    ]
    for name, value in zip(model.feature_names, model.beta[1:]):
        lines.append(f"  {name:<24} {value: .6g}")
    if report.ridge_used:
        lines.append(f"  ridge used: {report.ridge_used:g}")
    return "\n".join(lines) + "\n"


def _emit_report(args: argparse.Namespace, report: PrescriptionReport, out) -> None:
    rendered = report_to_json(report)
    if out is not None:
        Path(out).write_text(rendered, encoding="utf-8")
    if args.json:
        sys.stdout.write(rendered)
    else:
        sys.stdout.write(render_report_table(report))


def cmd_fit(args: argparse.Namespace) -> int:
    config = _load_config_file(args.config) if args.config else {}
    data_path, label, policy = _dataset_settings(args, config)
    dataset = load_dataset(data_path, label, policy)
    model, report = fit(dataset)
    out = _pick(args, "out", config.get("out"), None)
    if out is not None:
        save_model(model, Path(out), report)
    if args.json:
        sys.stdout.write(model_to_json(model, report))
    else:
        sys.stdout.write(_render_fit_summary(model, report, dataset))
    return 0


def _bounds_from_args(args: argparse.Namespace, config: dict) -> Bounds:
    if args.bounds is not None:
        path = Path(args.bounds)
        if not path.exists():
            raise FileNotFoundError(f"no such file: {path}")
        payload = json.loads(path.read_text(encoding="utf-8"))
        try:
            return Bounds(
                np.asarray(payload["lower"], dtype=float),
                np.asarray(payload["upper"], dtype=float),
            )
        except (KeyError, TypeError) as exc:
            raise _UsageError(f"{path}: bounds file needs 'lower' and 'upper' arrays") from exc
    data_path, label, policy = _dataset_settings(args, config)
    return compute_bounds(load_dataset(data_path, label, policy))


def cmd_optimize(args: argparse.Namespace) -> int:
    config = _load_config_file(args.config) if args.config else {}
    if args.model is None:
        raise _UsageError("--model is required")
    model, fit_report = load_model(args.model)
    bounds = _bounds_from_args(args, config)
    pipeline_config = _pipeline_config(args, config)
    report = optimize_reliability(model, bounds, pipeline_config, fit_report=fit_report)
    _emit_report(args, report, _pick(args, "out", config.get("out"), None))
    return 0


def cmd_pipeline(args: argparse.Namespace) -> int:
    config = _load_config_file(args.config) if args.config else {}
    data_path, label, policy = _dataset_settings(args, config)
    dataset = load_dataset(data_path, label, policy)
    pipeline_config = _pipeline_config(args, config)
    report = run_pipeline(dataset, pipeline_config)
    if args.model_out is not None:
        save_model(report.model, Path(args.model_out), report.fit_report)
    _emit_report(args, report, _pick(args, "out", config.get("out"), None))
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    seed = args.seed if args.seed is not None else _env_seed()
    n = args.features
    if n is None or args.rows is None:
        raise _UsageError("--features and --rows are required")
    if n < 1 or args.rows < 2:
        raise InvalidDimensionsError("need --features >= 1 and --rows >= 2")
    if args.lower >= args.upper:
        raise _UsageError("--lower must be strictly below --upper")
    ranges = Bounds(np.full(n, float(args.lower)), np.full(n, float(args.upper)))
    if args.beta is not None:
        try:
            beta = np.asarray([float(v) for v in args.beta.split(",")], dtype=float)
        except ValueError:
            raise _UsageError("--beta must be a comma-separated list of numbers") from None
    else:
        # separate stream so the coefficients do not collide with the data draws
        beta = np.random.default_rng([seed, 1]).uniform(-2.0, 2.0, n + 1)
    dataset, beta = generate_synthetic(n, args.rows, beta, ranges, seed)
    save_dataset(dataset, args.out)
    print(f"wrote {dataset.n_rows} rows x {dataset.n_features} features to {args.out}")
    print(f"true beta: [{', '.join(repr(float(b)) for b in beta)}]")
    print(f"healthy fraction: {dataset.labels.mean():.4f}")
    return 0


def _add_dataset_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--data", type=Path, help="labeled CSV of financial ratios")
    parser.add_argument("--label", help="name of the 0/1 health label column")
    parser.add_argument(
        "--missing",
        choices=["mean", "reject"],
        help="missing-cell policy: impute the column mean, or reject the file (default: mean)",
    )


def _add_swarm_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--pop", type=int, help=f"particles per run (default {DEFAULT_POP})")
    parser.add_argument(
        "--iters", type=int, help=f"update sweeps per run (default {DEFAULT_ITERS})"
    )
    parser.add_argument("--runs", type=int, help=f"ensemble size (default {DEFAULT_N_RUNS})")
    parser.add_argument(
        "--seed",
        type=int,
        help=f"base seed; run i uses seed+i (default ${SEED_ENV_VAR} or {DEFAULT_SEED})",
    )
    parser.add_argument("--c1", type=float, help="personal attraction weight (default 2)")
    parser.add_argument("--c2", type=float, help="global attraction weight (default 2)")
    parser.add_argument("--w-start", dest="w_start", type=float, help="initial inertia (default 0.9)")
    parser.add_argument("--w-end", dest="w_end", type=float, help="final inertia (default 0.4)")
    parser.add_argument(
        "--prescriptions",
        type=int,
        help=f"near-optimal solutions to report (default {DEFAULT_N_PRESCRIPTIONS})",
    )
    parser.add_argument(
        "--radius",
        type=float,
        help="normalized distinctness radius for prescriptions (default "
        f"{DEFAULT_DISTINCTNESS_RADIUS})",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reliopt",
        description="Estimate bank reliability from financial ratios and "
        "prescribe ratio targets that maximize it.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fit_parser = sub.add_parser("fit", help="fit the reliability model from a labeled CSV")
    _add_dataset_flags(fit_parser)
    fit_parser.add_argument("--out", type=Path, help="where to write the model JSON")
    fit_parser.add_argument("--json", action="store_true", help="print model JSON to stdout")
    fit_parser.add_argument("--config", type=Path, help="JSON config file (flags win)")
    fit_parser.set_defaults(handler=cmd_fit)

    optimize_parser = sub.add_parser(
        "optimize", help="maximize reliability of a fitted model over data-derived bounds"
    )
    optimize_parser.add_argument("--model", type=Path, help="model JSON from 'fit'")
    optimize_parser.add_argument(
        "--bounds", type=Path, help="explicit bounds JSON {lower: [...], upper: [...]}"
    )
    _add_dataset_flags(optimize_parser)
    _add_swarm_flags(optimize_parser)
    optimize_parser.add_argument("--out", type=Path, help="where to write the report JSON")
    optimize_parser.add_argument("--json", action="store_true", help="print report JSON to stdout")
    optimize_parser.add_argument("--config", type=Path, help="JSON config file (flags win)")
    optimize_parser.set_defaults(handler=cmd_optimize)

    pipeline_parser = sub.add_parser(
        "pipeline", help="fit and optimize in one invocation"
    )
    _add_dataset_flags(pipeline_parser)
    _add_swarm_flags(pipeline_parser)
    pipeline_parser.add_argument("--out", type=Path, help="where to write the report JSON")
    pipeline_parser.add_argument(
        "--model-out", dest="model_out", type=Path, help="where to write the model JSON"
    )
    pipeline_parser.add_argument("--json", action="store_true", help="print report JSON to stdout")
    pipeline_parser.add_argument("--config", type=Path, help="JSON config file (flags win)")
    pipeline_parser.set_defaults(handler=cmd_pipeline)

    gen_parser = sub.add_parser("gen", help="generate a synthetic labeled dataset")
    gen_parser.add_argument("--features", type=int, help="number of ratio columns")
    gen_parser.add_argument("--rows", type=int, help="number of banks")
    gen_parser.add_argument("--seed", type=int, help=f"RNG seed (default ${SEED_ENV_VAR} or 0)")
    gen_parser.add_argument("--out", type=Path, required=True, help="CSV output path")
    gen_parser.add_argument(
        "--beta",
        help="comma-separated true coefficients, intercept first "
        "(default: drawn uniformly from [-2, 2])",
    )
    gen_parser.add_argument("--lower", type=float, default=0.0, help="feature lower bound")
    gen_parser.add_argument("--upper", type=float, default=1.0, help="feature upper bound")
    gen_parser.set_defaults(handler=cmd_gen)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (_UsageError, UnknownLabelColumnError, InvalidDimensionsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ReliOptError, FileNotFoundError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
