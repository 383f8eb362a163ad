"""Command-line front end.

Exit codes: 0 success, 1 runtime failure, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import logging
import sys
import warnings
from importlib import resources
from pathlib import Path
from typing import Sequence

from . import __version__
from .domain import CapacityError, ScenarioConfig, ScenarioError, ScenarioValidationError, load_scenario, parse_scenario
from .engine import SERIES_COLUMNS, SWEEPABLE, batch_run, run, sweep_config
from .metrics import (
    DEFAULT_SIGMA,
    MetricError,
    emotion_heatmap,
    entropy_metric,
    extract_dominant_paths,
    idm,
    mean_angular_error,
)
from .outputs import (
    MANIFEST_SCHEMA,
    METRICS_SCHEMA,
    REPORT_SCHEMA,
    TraceFormatError,
    read_trace_jsonl,
    write_heatmap_csv,
    write_json,
    write_runs_csv,
    write_series_csv,
    write_summary_csv,
    write_trace_jsonl,
)

log = logging.getLogger("antcrowd")

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def bundled_scenarios() -> list[str]:
    root = resources.files("antcrowd") / "scenarios"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def resolve_scenario(name_or_path: str) -> ScenarioConfig:
    """Load a scenario file, or a bundled scenario by name (e.g. ``no1``)."""
    path = Path(name_or_path)
    if not path.exists() and name_or_path in bundled_scenarios():
        import json

        text = (resources.files("antcrowd") / "scenarios" / f"{name_or_path}.json").read_text(encoding="utf-8")
        return parse_scenario(json.loads(text))
    return load_scenario(path)


def _config(args: argparse.Namespace) -> ScenarioConfig:
    cfg = resolve_scenario(args.scenario)
    changes = {}
    if getattr(args, "seed", None) is not None:
        changes["seed"] = args.seed
    if getattr(args, "max_ticks", None) is not None:
        changes["max_ticks"] = args.max_ticks
    return cfg.with_updates(**changes) if changes else cfg


def _manifest(command: str, cfg: ScenarioConfig, **extra) -> dict:
    return {
        "schema": MANIFEST_SCHEMA,
        "version": __version__,
        "command": command,
        "config": cfg.to_document(),
        **extra,
    }


def cmd_run(args: argparse.Namespace) -> int:
    cfg = _config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    res = run(cfg)
    write_series_csv(out / "series.csv", SERIES_COLUMNS, res.series)
    write_trace_jsonl(out / "trace.jsonl", res.trace)
    heat = out / "heatmaps"
    heat.mkdir(exist_ok=True)
    for snap in res.trace:
        if snap.tick % args.heatmap_every == 0 or snap.tick == res.termination_tick:
            field = emotion_heatmap(snap, args.sigma, shape=(cfg.rows, cfg.cols))
            write_heatmap_csv(heat / f"tick_{snap.tick:05d}.csv", snap.tick, field)
    write_json(out / "metrics.json", {
        "schema": METRICS_SCHEMA,
        "termination_tick": res.termination_tick,
        "reason": res.reason,
        "final": {k: res.final(k) for k in SERIES_COLUMNS},
    })
    write_json(out / "manifest.json", _manifest(
        "run", cfg, seeds=[res.seed], heatmap_every=args.heatmap_every, sigma=args.sigma,
    ))
    print(f"run finished at tick {res.termination_tick} ({res.reason}); wrote {out}")
    return EXIT_OK


def _write_batch(out: Path, batch) -> None:
    out.mkdir(parents=True, exist_ok=True)
    write_series_csv(out / "series.csv", SERIES_COLUMNS, batch.mean, batch.std)
    write_runs_csv(out / "runs.csv", batch.runs, SERIES_COLUMNS)


def cmd_batch(args: argparse.Namespace) -> int:
    if args.runs < 1:
        raise UsageError("--runs must be >= 1")
    cfg = _config(args)
    base = cfg.seed if args.base_seed is None else args.base_seed
    batch = batch_run(cfg, args.runs, base, jobs=args.jobs)
    out = Path(args.out)
    _write_batch(out, batch)
    write_json(out / "metrics.json", {
        "schema": METRICS_SCHEMA,
        "n_runs": batch.n_runs,
        "final_mean": {k: batch.mean[k][-1] for k in SERIES_COLUMNS},
        "final_std": {k: batch.std[k][-1] for k in SERIES_COLUMNS},
    })
    write_json(out / "manifest.json", _manifest(
        "batch", cfg, n_runs=args.runs, base_seed=base, seeds=batch.seeds,
    ))
    print(f"batch of {args.runs} runs written to {out}")
    return EXIT_OK


def _parse_values(text: str) -> list[str]:
    vals = [v.strip() for v in text.split(",") if v.strip()]
    if not vals:
        raise UsageError("--values needs at least one value")
    return vals


def cmd_sweep(args: argparse.Namespace) -> int:
    if args.param.lower() not in SWEEPABLE:
        raise UsageError(
            f"unknown sweep parameter {args.param!r}; sweepable parameters: {', '.join(SWEEPABLE)}"
        )
    if args.runs < 1:
        raise UsageError("--runs must be >= 1")
    cfg = _config(args)
    base = cfg.seed if args.base_seed is None else args.base_seed
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    from .engine import SweepResult

    values, batches = [], []
    for raw in _parse_values(args.values):
        try:
            one = sweep_config(cfg, args.param, float(raw))
        except ValueError as exc:
            if isinstance(exc, ScenarioValidationError):
                raise
            raise UsageError(f"bad sweep value {raw!r}: {exc}") from exc
        log.info("sweep %s=%s", args.param, raw)
        batch = batch_run(one, args.runs, base, jobs=args.jobs)
        _write_batch(out / f"{args.param}={raw}", batch)
        values.append(raw)
        batches.append(batch)
    summary = SweepResult(args.param, values, batches).summary()
    write_summary_csv(out / "summary.csv", summary)
    write_json(out / "manifest.json", _manifest(
        "sweep", cfg, parameter=args.param, values=values, n_runs=args.runs, base_seed=base,
        seeds=[base + i for i in range(args.runs)],
    ))
    for row in summary:
        print(f"{args.param}={row['value']}: final active ratio "
              f"{row['final_active_ratio_mean']:.4f} +/- {row['final_active_ratio_std']:.4f}")
    return EXIT_OK


def compare_traces(trace_a, trace_b, link_radius: float, min_group: int, matching: str) -> dict:
    paths_a = extract_dominant_paths(trace_a, link_radius, min_group) if len(trace_a) else []
    paths_b = extract_dominant_paths(trace_b, link_radius, min_group) if len(trace_b) else []
    report = {
        "schema": REPORT_SCHEMA,
        "entropy": None,
        "mean_ae": None,
        "idm": None,
        "paths_a": len(paths_a),
        "paths_b": len(paths_b),
        "warnings": [],
    }
    for key, fn in (("entropy", entropy_metric), ("mean_ae", mean_angular_error)):
        try:
            report[key] = float(fn(paths_a, paths_b, matching=matching))
        except MetricError as exc:
            report["warnings"].append(f"{key}: {exc}")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        report["idm"] = idm(paths_a, paths_b)
    report["warnings"].extend(f"idm: {w.message}" for w in caught)
    return report


def cmd_compare(args: argparse.Namespace) -> int:
    a = read_trace_jsonl(args.trace_a)
    b = read_trace_jsonl(args.trace_b)
    report = compare_traces(a, b, args.link_radius, args.min_group, args.matching)
    for w in report["warnings"]:
        print(f"warning: {w}", file=sys.stderr)
    if args.out:
        write_json(args.out, report)
    else:
        import json

        print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_scenarios(args: argparse.Namespace) -> int:
    for name in bundled_scenarios():
        print(name)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="antcrowd", description="Antagonistic crowd simulation.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def scenario_args(sp):
        sp.add_argument("--scenario", required=True, help="scenario JSON file or bundled name (see `scenarios`)")
        sp.add_argument("--out", required=True, help="output directory")
        sp.add_argument("--max-ticks", type=int)

    sp = sub.add_parser("run", help="one simulation with trace, series and heat maps")
    scenario_args(sp)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--heatmap-every", type=int, default=5)
    sp.add_argument("--sigma", type=float, default=DEFAULT_SIGMA)
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("batch", help="seeded batch with averaged series")
    scenario_args(sp)
    sp.add_argument("--runs", type=int, default=200)
    sp.add_argument("--base-seed", type=int)
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_batch)

    sp = sub.add_parser("sweep", help="one batch per parameter value")
    scenario_args(sp)
    sp.add_argument("--param", required=True, help=f"one of: {', '.join(SWEEPABLE)}")
    sp.add_argument("--values", required=True, help="comma-separated list")
    sp.add_argument("--runs", type=int, default=200)
    sp.add_argument("--base-seed", type=int)
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("compare", help="trajectory similarity between two traces")
    sp.add_argument("trace_a")
    sp.add_argument("trace_b")
    sp.add_argument("--out")
    sp.add_argument("--link-radius", type=float, default=1.5)
    sp.add_argument("--min-group", type=int, default=3)
    sp.add_argument("--matching", choices=("greedy", "optimal"), default="greedy")
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("scenarios", help="list bundled scenarios")
    sp.set_defaults(func=cmd_scenarios)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ScenarioValidationError as exc:
        for v in exc.violations:
            print(f"error: {v}", file=sys.stderr)
        return EXIT_USAGE
    except (ScenarioError, CapacityError, TraceFormatError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        log.debug("failure", exc_info=True)
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
