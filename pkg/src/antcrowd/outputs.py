"""Flat-file writers and readers: series CSV, trace JSON lines, heat maps, reports.

Every file starts by naming its schema so readers can refuse versions they
do not understand.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .domain import SimulationTrace, Snapshot

SERIES_SCHEMA = "antcrowd.series/1"
TRACE_SCHEMA = "antcrowd.trace/1"
HEATMAP_SCHEMA = "antcrowd.heatmap/1"
RUNS_SCHEMA = "antcrowd.runs/1"
SUMMARY_SCHEMA = "antcrowd.sweep-summary/1"
REPORT_SCHEMA = "antcrowd.compare/1"
METRICS_SCHEMA = "antcrowd.metrics/1"
MANIFEST_SCHEMA = "antcrowd.manifest/1"


class TraceFormatError(ValueError):
    pass


def fmt(x: Any) -> str:
    """Shortest round-trip text for numbers; 'nan' for missing values."""
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if x.is_integer() and abs(x) < 1e15:
            return str(int(x))
        return repr(x)
    if isinstance(x, (np.integer,)):
        return str(int(x))
    return str(x)


def _write_table(path: Path, schema: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# schema={schema}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def read_table(path: str | Path) -> tuple[str, list[dict[str, str]]]:
    """Return (schema, rows) for a CSV written by this module."""
    with open(path, encoding="utf-8") as fh:
        first = fh.readline().strip()
        if not first.startswith("# schema="):
            raise ValueError(f"{path}: missing schema line")
        return first[len("# schema="):], list(csv.DictReader(fh))


def write_series_csv(
    path: str | Path,
    columns: Sequence[str],
    mean: Mapping[str, np.ndarray],
    std: Mapping[str, np.ndarray] | None = None,
) -> None:
    header = ["tick", *columns]
    if std is not None:
        header += [f"{c}_std" for c in columns]
    length = len(mean[columns[0]])
    rows = []
    for t in range(length):
        row: list[Any] = [t, *(mean[c][t] for c in columns)]
        if std is not None:
            row += [std[c][t] for c in columns]
        rows.append(row)
    _write_table(Path(path), SERIES_SCHEMA, header, rows)


def write_runs_csv(path: str | Path, runs: Sequence[Any], columns: Sequence[str]) -> None:
    header = ["run", "seed", "termination_tick", "reason", *(f"final_{c}" for c in columns)]
    rows = [
        [r.index, r.seed, r.termination_tick, r.reason, *(r.final[c] for c in columns)] for r in runs
    ]
    _write_table(Path(path), RUNS_SCHEMA, header, rows)


def write_summary_csv(path: str | Path, summary: Sequence[Mapping[str, Any]]) -> None:
    header = list(summary[0]) if summary else ["value"]
    _write_table(Path(path), SUMMARY_SCHEMA, header, ([row[k] for k in header] for row in summary))


def write_heatmap_csv(path: str | Path, tick: int, field: np.ndarray) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# schema={HEATMAP_SCHEMA} tick={tick} rows={field.shape[0]} cols={field.shape[1]}\n")
        w = csv.writer(fh, lineterminator="\n")
        for row in field:
            w.writerow([fmt(v) for v in row])


def write_trace_jsonl(path: str | Path, trace: SimulationTrace) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"schema": TRACE_SCHEMA, "rows": trace.rows, "cols": trace.cols}) + "\n")
        for snap in trace:
            fh.write(json.dumps(snap.to_record(), separators=(",", ":")) + "\n")


def read_trace_jsonl(path: str | Path) -> SimulationTrace:
    """Parse a trace file. A zero-length file reads as an empty trace."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise TraceFormatError(f"cannot read trace {path}: {exc.strerror}") from exc
    lines = [ln for ln in lines if ln.strip()]
    if not lines:
        return SimulationTrace(0, 0)
    try:
        head = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise TraceFormatError(f"{path}: bad header line: {exc.msg}") from exc
    if not isinstance(head, dict) or head.get("schema") != TRACE_SCHEMA:
        raise TraceFormatError(f"{path}: expected schema {TRACE_SCHEMA}, got {head.get('schema')!r}"
                               if isinstance(head, dict) else f"{path}: header is not an object")
    trace = SimulationTrace(int(head["rows"]), int(head["cols"]))
    for n, line in enumerate(lines[1:], start=2):
        try:
            trace.append(Snapshot.from_record(json.loads(line)))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise TraceFormatError(f"{path}:{n}: malformed snapshot ({exc})") from exc
    return trace


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return None if math.isnan(x) or math.isinf(x) else x
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def write_json(path: str | Path, obj: Mapping[str, Any]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_jsonable(obj), fh, indent=2, sort_keys=True)
        fh.write("\n")
