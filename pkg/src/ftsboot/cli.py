"""Command line interface.

Subcommands: simulate, estimate, bootstrap, experiment, ingest. Options
can come from a ``key = value`` config file (``--config``); explicit
command line flags override it, and unknown config keys are rejected.
Every run echoes its fully resolved configuration next to its outputs so
results can be reproduced exactly.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from ftsboot.bootstrap import (
    BootstrapMethod,
    bootstrap_errors,
    bootstrap_lrcov_ensemble,
    generate_ensemble,
    surface_ci,
)
from ftsboot.core import FunctionalSample, hs_norm
from ftsboot.lrcov import LrcovConfig, WeightKernel, lrcov_estimate, plugin_bandwidth
from ftsboot.io import (
    IngestSpec,
    ingest_series,
    read_long_series,
    read_sample,
    write_metadata,
    write_sample,
    write_surface,
)
from ftsboot.sim import (
    DgpSpec,
    ExperimentConfig,
    gen_dgp,
    run_experiment,
)

METHOD_NAMES = {"iid": "iid", "me": "me_score", "far": "far1", "fkr": "fkr"}
_KIND_TO_NAME = {v: k for k, v in METHOD_NAMES.items()}

STATIONARITY_NOTE = (
    "note: estimates assume a stationary series; "
    "difference or detrend trending data first"
)

_KNOWN_KEYS = {
    "simulate": {"dgp", "n", "grid_size", "burn_in", "seed", "out"},
    "estimate": {"input", "kernel", "bandwidth", "out"},
    "bootstrap": {
        "input",
        "method",
        "repetitions",
        "seed",
        "alpha",
        "level",
        "kernel",
        "bandwidth",
        "out",
    },
    "experiment": {
        "dgp",
        "method",
        "replications",
        "repetitions",
        "alpha",
        "seed",
        "grid_size",
        "burn_in",
        "kernel",
        "bandwidth",
        "n_jobs",
        "out",
    },
    "ingest": {"input", "column", "period", "missing", "out"},
}


class CliError(ValueError):
    pass


def _read_config(path) -> dict:
    values: dict = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if key in values:
            raise CliError(f"{path}:{lineno}: duplicate config key '{key}'")
        values[key] = value.strip()
    return values


def _merge(args: argparse.Namespace, command: str) -> dict:
    file_values: dict = {}
    if getattr(args, "config", None):
        file_values = _read_config(args.config)
        unknown = sorted(set(file_values) - _KNOWN_KEYS[command])
        if unknown:
            raise CliError(
                f"unknown config key '{unknown[0]}' for command '{command}'"
            )
    merged = {}
    for key in _KNOWN_KEYS[command]:
        cli_value = getattr(args, key, None)
        merged[key] = cli_value if cli_value is not None else file_values.get(key)
    return merged


def _require(merged: dict, key: str) -> str:
    value = merged.get(key)
    if value is None:
        raise CliError(f"'{key}' is required (flag --{key.replace('_', '-')})")
    return value


def _parse_seed(raw) -> int:
    try:
        seed = int(raw)
    except (TypeError, ValueError):
        raise CliError(f"seed must be an integer, got '{raw}'") from None
    if not 0 <= seed < 2**64:
        raise CliError("seed must be a nonnegative 64-bit integer")
    return seed


def _parse_int(raw, key: str, minimum: int = 1) -> int:
    try:
        value = int(raw)
    except (TypeError, ValueError):
        raise CliError(f"'{key}' must be an integer, got '{raw}'") from None
    if value < minimum:
        raise CliError(f"'{key}' must be >= {minimum}")
    return value


def _parse_alphas(raw) -> tuple:
    try:
        alphas = tuple(float(tok) for tok in str(raw).split(",") if tok.strip())
    except ValueError:
        raise CliError(f"could not parse alpha list '{raw}'") from None
    if not alphas or not all(0.0 < a < 1.0 for a in alphas):
        raise CliError("each alpha must lie strictly between 0 and 1")
    return alphas


def _parse_bandwidth(raw):
    if raw is None or raw == "plugin":
        return "plugin"
    try:
        return float(raw)
    except ValueError:
        raise CliError(
            f"bandwidth must be 'plugin' or a positive number, got '{raw}'"
        ) from None


def _parse_dgp_token(token: str, default_n=None) -> DgpSpec:
    parts = str(token).split(":")
    if len(parts) not in (2, 3):
        raise CliError(
            f"bad dgp '{token}', expected family:coeff1,coeff2[:n]"
        )
    family = parts[0].strip()
    try:
        coeffs = tuple(float(c) for c in parts[1].split(",") if c.strip())
    except ValueError:
        raise CliError(f"bad dgp coefficients in '{token}'") from None
    n = _parse_int(parts[2], "n", minimum=2) if len(parts) == 3 else default_n
    if n is None:
        raise CliError(f"dgp '{token}' needs a sample size, like {token}:100")
    return family, coeffs, n


def _parse_methods(raw) -> list:
    tokens = raw.split() if isinstance(raw, str) else list(raw)
    kinds = []
    for tok in tokens:
        if tok not in METHOD_NAMES:
            raise CliError(
                f"unknown method '{tok}' (choose from {', '.join(METHOD_NAMES)})"
            )
        kinds.append(METHOD_NAMES[tok])
    if not kinds:
        raise CliError("at least one method is required")
    return kinds


def _lrcov_config(merged: dict) -> LrcovConfig:
    kernel_name = merged.get("kernel") or "bartlett"
    kernel = WeightKernel(kernel_name)
    return LrcovConfig(kernel=kernel, bandwidth=_parse_bandwidth(merged.get("bandwidth")))


def _json_ready(value):
    if isinstance(value, (list, tuple)):
        return [_json_ready(v) for v in value]
    return value


def _echo_config(path, command: str, resolved: dict) -> None:
    payload = {"command": command}
    payload.update({k: _json_ready(v) for k, v in resolved.items()})
    write_metadata(path, payload)


def cmd_simulate(args) -> int:
    merged = _merge(args, "simulate")
    grid_size = _parse_int(merged.get("grid_size") or 21, "grid_size", minimum=2)
    burn_in = _parse_int(merged.get("burn_in") or 100, "burn_in", minimum=0)
    default_n = (
        _parse_int(merged["n"], "n", minimum=2) if merged.get("n") is not None else None
    )
    family, coeffs, n = _parse_dgp_token(_require(merged, "dgp"), default_n)
    seed = _parse_seed(_require(merged, "seed"))
    out = _require(merged, "out")
    spec = DgpSpec(family, coeffs, n=n, grid_size=grid_size, burn_in=burn_in)
    sample = gen_dgp(spec, seed)
    write_sample(out, sample)
    _echo_config(
        f"{out}.meta.json",
        "simulate",
        {
            "dgp": spec.label,
            "n": n,
            "grid_size": grid_size,
            "burn_in": burn_in,
            "seed": seed,
        },
    )
    print(f"wrote {sample.n_curves} curves of length {sample.n_points} to {out}")
    return 0


def cmd_estimate(args) -> int:
    merged = _merge(args, "estimate")
    sample = read_sample(_require(merged, "input"))
    out = _require(merged, "out")
    config = _lrcov_config(merged)
    print(STATIONARITY_NOTE, file=sys.stderr)
    if config.bandwidth == "plugin":
        chosen = plugin_bandwidth(sample)
        if chosen.degenerate:
            print(
                "warning: flat pilot estimate, falling back to the default bandwidth",
                file=sys.stderr,
            )
        bandwidth_used = chosen.h
    else:
        bandwidth_used = float(config.bandwidth)
    surface = lrcov_estimate(sample, config)
    write_surface(out, surface)
    _echo_config(
        f"{out}.meta.json",
        "estimate",
        {
            "input": str(merged["input"]),
            "kernel": config.kernel.family,
            "bandwidth": merged.get("bandwidth") or "plugin",
            "bandwidth_used": bandwidth_used,
        },
    )
    print(f"bandwidth: {bandwidth_used:.6g}")
    print(f"hs_norm: {hs_norm(surface):.6g}")
    print(f"wrote surface to {out}")
    return 0


def cmd_bootstrap(args) -> int:
    merged = _merge(args, "bootstrap")
    sample = read_sample(_require(merged, "input"))
    method_kind = _parse_methods(_require(merged, "method"))
    if len(method_kind) != 1:
        raise CliError("bootstrap takes exactly one method")
    method = BootstrapMethod(method_kind[0])
    n_reps = _parse_int(merged.get("repetitions") or 199, "repetitions")
    seed = _parse_seed(_require(merged, "seed"))
    alphas = _parse_alphas(merged.get("alpha") or "0.05,0.2,0.5")
    level = float(merged["level"]) if merged.get("level") is not None else None
    if level is not None and not 0.0 < level < 1.0:
        raise CliError("level must lie in (0, 1)")
    outdir = Path(_require(merged, "out"))
    outdir.mkdir(parents=True, exist_ok=True)
    config = _lrcov_config(merged)
    print(STATIONARITY_NOTE, file=sys.stderr)

    point = lrcov_estimate(sample, config)
    ensemble = generate_ensemble(sample, method, n_reps, seed)
    surfaces = bootstrap_lrcov_ensemble(ensemble, config)
    errors = bootstrap_errors(surfaces, point)

    write_surface(outdir / "point_estimate.csv", point)
    intervals = {}
    for alpha in alphas:
        lower = float(np.quantile(errors, alpha / 2.0))
        upper = float(np.quantile(errors, 1.0 - alpha / 2.0))
        intervals[format(alpha, "g")] = {"lower": lower, "upper": upper}
        print(f"alpha {alpha:g}: error interval [{lower:.6g}, {upper:.6g}]")
    write_metadata(
        outdir / "error_ci.json",
        {"intervals": intervals, "repetitions": n_reps, "method": _KIND_TO_NAME[method.kind]},
    )
    if level is not None:
        low_surf, high_surf = surface_ci(surfaces, level)
        write_surface(outdir / "surface_lower.csv", low_surf)
        write_surface(outdir / "surface_upper.csv", high_surf)
        print(f"wrote pointwise {level:g} bands to {outdir}")
    _echo_config(
        outdir / "run_config.json",
        "bootstrap",
        {
            "input": str(merged["input"]),
            "method": _KIND_TO_NAME[method.kind],
            "repetitions": n_reps,
            "seed": seed,
            "alpha": list(alphas),
            "level": level,
            "kernel": config.kernel.family,
            "bandwidth": merged.get("bandwidth") or "plugin",
        },
    )
    return 0


def cmd_experiment(args) -> int:
    merged = _merge(args, "experiment")
    grid_size = _parse_int(merged.get("grid_size") or 21, "grid_size", minimum=2)
    burn_in = _parse_int(merged.get("burn_in") or 100, "burn_in", minimum=0)
    dgp_raw = merged.get("dgp")
    if not dgp_raw:
        raise CliError("'dgp' is required (flag --dgp, repeatable)")
    tokens = dgp_raw.split() if isinstance(dgp_raw, str) else list(dgp_raw)
    dgps = []
    for token in tokens:
        family, coeffs, n = _parse_dgp_token(token)
        dgps.append(
            DgpSpec(family, coeffs, n=n, grid_size=grid_size, burn_in=burn_in)
        )
    kinds = _parse_methods(merged.get("method") or "iid me far fkr")
    replications = _parse_int(merged.get("replications") or 20, "replications")
    repetitions = _parse_int(merged.get("repetitions") or 199, "repetitions")
    alphas = _parse_alphas(merged.get("alpha") or "0.05,0.2,0.5")
    seed = _parse_seed(_require(merged, "seed"))
    n_jobs = _parse_int(merged.get("n_jobs") or 1, "n_jobs")
    outdir = Path(_require(merged, "out"))
    outdir.mkdir(parents=True, exist_ok=True)

    config = ExperimentConfig(
        dgps=tuple(dgps),
        methods=tuple(BootstrapMethod(k) for k in kinds),
        n_replications=replications,
        n_repetitions=repetitions,
        alphas=alphas,
        master_seed=seed,
        lrcov=_lrcov_config(merged),
        n_jobs=n_jobs,
    )
    report = run_experiment(config)

    rows = []
    for dgp in config.dgps:
        for alpha in alphas:
            group = [
                report.get(dgp.label, m.kind, alpha, n=dgp.n)
                for m in config.methods
            ]
            means = [cell.mean for cell in group]
            finite = [i for i, m in enumerate(means) if np.isfinite(m)]
            best = min(finite, key=lambda i: means[i]) if finite else None
            for i, cell in enumerate(group):
                rows.append(
                    {
                        "dgp": cell.dgp,
                        "n": cell.n,
                        "method": _KIND_TO_NAME[cell.method],
                        "alpha": cell.alpha,
                        "mean_score": cell.mean,
                        "failures": len(cell.failures),
                        "is_min": i == best,
                    }
                )

    _write_table_csv(outdir / "table.csv", rows)
    _echo_config(
        outdir / "run_config.json",
        "experiment",
        {
            "dgp": [d.label for d in config.dgps],
            "n": [d.n for d in config.dgps],
            "method": [_KIND_TO_NAME[k] for k in kinds],
            "replications": replications,
            "repetitions": repetitions,
            "alpha": list(alphas),
            "seed": seed,
            "grid_size": grid_size,
            "burn_in": burn_in,
            "kernel": config.lrcov.kernel.family,
            "bandwidth": merged.get("bandwidth") or "plugin",
            "n_jobs": n_jobs,
        },
    )
    _print_table(rows)
    failed = sum(row["failures"] for row in rows)
    if failed:
        print(f"warning: {failed} cell failures recorded in table.csv", file=sys.stderr)
    return 0


def _write_table_csv(path, rows) -> None:
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["dgp", "n", "method", "alpha", "mean_score", "failures", "is_min"]
        )
        for row in rows:
            writer.writerow(
                [
                    row["dgp"],
                    row["n"],
                    row["method"],
                    format(row["alpha"], "g"),
                    format(row["mean_score"], ".17g"),
                    row["failures"],
                    int(row["is_min"]),
                ]
            )


def _print_table(rows) -> None:
    header = f"{'dgp':<16}{'n':>6}  {'method':<8}{'alpha':>7}  {'mean_score':>12}  {'min':<3}"
    print(header)
    print("-" * len(header))
    for row in rows:
        print(
            f"{row['dgp']:<16}{row['n']:>6}  {row['method']:<8}"
            f"{row['alpha']:>7g}  {row['mean_score']:>12.4f}  "
            f"{'*' if row['is_min'] else '':<3}"
        )


def cmd_ingest(args) -> int:
    merged = _merge(args, "ingest")
    path = _require(merged, "input")
    period = _parse_int(_require(merged, "period"), "period", minimum=2)
    policy = merged.get("missing") or "error"
    if policy == "drop":
        policy = "drop_whole_curve"
    spec = IngestSpec(period=period, missing_policy=policy)
    out = _require(merged, "out")
    values = read_long_series(path, column=merged.get("column"))
    sample, dropped = ingest_series(values, spec)
    write_sample(out, sample)
    _echo_config(
        f"{out}.meta.json",
        "ingest",
        {
            "input": str(path),
            "column": merged.get("column"),
            "period": period,
            "missing": merged.get("missing") or "error",
            "dropped_curves": list(dropped),
        },
    )
    print(
        f"wrote {sample.n_curves} curves of length {sample.n_points} to {out}"
        + (f" ({len(dropped)} dropped)" if dropped else "")
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ftsboot",
        description="Bootstrap inference for stationary functional time series.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="key = value config file")
        p.add_argument("--out", help="output file or directory")

    p_sim = sub.add_parser("simulate", help="draw a sample from a known process")
    add_common(p_sim)
    p_sim.add_argument("--dgp", help="process, like far:0.5 or fma:0.5,0.25")
    p_sim.add_argument("--n", help="number of curves")
    p_sim.add_argument("--grid-size", dest="grid_size", help="points per curve")
    p_sim.add_argument("--burn-in", dest="burn_in", help="warm-up steps (far only)")
    p_sim.add_argument("--seed", help="random seed (required)")

    p_est = sub.add_parser("estimate", help="long-run covariance of a sample")
    add_common(p_est)
    p_est.add_argument("--input", help="sample CSV")
    p_est.add_argument("--kernel", choices=["bartlett"], help="lag window kernel")
    p_est.add_argument("--bandwidth", help="'plugin' or a positive number")

    p_boot = sub.add_parser("bootstrap", help="bootstrap error intervals")
    add_common(p_boot)
    p_boot.add_argument("--input", help="sample CSV")
    p_boot.add_argument("--method", choices=sorted(METHOD_NAMES), help="bootstrap scheme")
    p_boot.add_argument("--repetitions", help="bootstrap repetitions")
    p_boot.add_argument("--seed", help="random seed (required)")
    p_boot.add_argument("--alpha", help="comma separated interval levels")
    p_boot.add_argument("--level", help="pointwise band level, like 0.9")
    p_boot.add_argument("--kernel", choices=["bartlett"], help="lag window kernel")
    p_boot.add_argument("--bandwidth", help="'plugin' or a positive number")

    p_exp = sub.add_parser("experiment", help="Monte Carlo interval score table")
    add_common(p_exp)
    p_exp.add_argument(
        "--dgp", action="append", help="process with size, like far:0.5:100 (repeatable)"
    )
    p_exp.add_argument(
        "--method", action="append", choices=sorted(METHOD_NAMES), help="repeatable"
    )
    p_exp.add_argument("--replications", help="Monte Carlo replications")
    p_exp.add_argument("--repetitions", help="bootstrap repetitions per replication")
    p_exp.add_argument("--alpha", help="comma separated interval levels")
    p_exp.add_argument("--seed", help="master seed (required)")
    p_exp.add_argument("--grid-size", dest="grid_size", help="points per curve")
    p_exp.add_argument("--burn-in", dest="burn_in", help="warm-up steps (far only)")
    p_exp.add_argument("--kernel", choices=["bartlett"], help="lag window kernel")
    p_exp.add_argument("--bandwidth", help="'plugin' or a positive number")
    p_exp.add_argument("--n-jobs", dest="n_jobs", help="parallel workers")

    p_ing = sub.add_parser("ingest", help="slice a long series into curves")
    add_common(p_ing)
    p_ing.add_argument("--input", help="long CSV, one value per row")
    p_ing.add_argument("--column", help="column name when the file has several")
    p_ing.add_argument("--period", help="values per curve")
    p_ing.add_argument(
        "--missing", choices=["error", "drop"], help="what to do with gaps"
    )

    return parser


_COMMANDS = {
    "simulate": cmd_simulate,
    "estimate": cmd_estimate,
    "bootstrap": cmd_bootstrap,
    "experiment": cmd_experiment,
    "ingest": cmd_ingest,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
