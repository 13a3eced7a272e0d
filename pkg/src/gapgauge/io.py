"""Files in, files out: CSV ingestion, run configuration, report emission.

Config files are JSON (``schema_version: 1``) and speak hours for anything
time-like, matching how gap lengths and training spans are usually quoted;
loading converts hours to samples with the series step.  All outputs are
written atomically (temp file in the target directory, then rename).
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .errors import (CadenceError, DuplicateTimestampError, ParseError,
                     SchemaError)
from .harness import AggregateRow, EvalConfig, EvalReport, aggregate
from .imputers import ImputerConfig
from .metrics import MetricRecord
from .series import TimeSeries

SCHEMA_VERSION = 1

RECORD_COLUMNS = ("gap_id", "imputer_id", "gap_len", "wd", "jsd", "rmse", "mae", "error")
AGGREGATE_COLUMNS = ("imputer_id", "gap_len", "mean_wd", "mean_jsd",
                     "mean_rmse", "mean_mae", "n", "n_failed")

# Config keys that speak hours, per imputer kind, mapped to the sample-unit
# parameter they populate.
_HOUR_PARAMS = {
    "polynomial": {"context_hours": "context"},
    "seasonal_naive": {"season_hours": "season"},
    "arima": {"train_span_hours": "train_span"},
    "sarima": {"train_span_hours": "train_span", "season_hours": "season"},
    "gbt": {"train_span_hours": "train_span", "sma_window_hours": "sma_window"},
}


@dataclass
class IngestSpec:
    path: str
    timestamp_column: str = "timestamp"
    value_column: str = "value"
    timestamp_format: str = "epoch"  # or "iso8601"
    expected_step: float = 3600.0
    missing_policy: str = "reject"  # or "mask"

    def __post_init__(self):
        if self.expected_step <= 0:
            raise SchemaError("expected_step must be > 0", path="ingest.expected_step")
        if self.timestamp_format not in ("epoch", "iso8601"):
            raise SchemaError("timestamp_format must be 'epoch' or 'iso8601'",
                              path="ingest.timestamp_format")
        if self.missing_policy not in ("reject", "mask"):
            raise SchemaError("missing_policy must be 'reject' or 'mask'",
                              path="ingest.missing_policy")


def _parse_timestamp(text: str, fmt: str, line: int) -> float:
    try:
        if fmt == "epoch":
            return float(text)
        stamp = datetime.fromisoformat(text.replace("Z", "+00:00"))
        if stamp.tzinfo is None:
            stamp = stamp.replace(tzinfo=timezone.utc)
        return stamp.timestamp()
    except ValueError:
        raise ParseError(f"unparseable timestamp {text!r}", line=line) from None


def ingest_csv(spec: IngestSpec) -> TimeSeries:
    """Read one uniformly sampled series from a CSV export.

    Rows may arrive unsorted.  Timestamps must sit on the expected-step grid
    anchored at the earliest row; with ``missing_policy="mask"`` absent grid
    positions (and blank value cells) become masked samples, with
    ``"reject"`` they raise :class:`CadenceError` naming the line after the
    break.
    """
    rows: list[tuple[float, float | None, int]] = []
    with open(spec.path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("file has no header row", line=1) from None
        try:
            ts_col = header.index(spec.timestamp_column)
            val_col = header.index(spec.value_column)
        except ValueError as exc:
            raise ParseError(f"column not found in header: {exc}", line=1) from None
        for line, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) <= max(ts_col, val_col):
                raise ParseError("row has too few columns", line=line)
            stamp = _parse_timestamp(row[ts_col].strip(), spec.timestamp_format, line)
            raw = row[val_col].strip()
            if raw == "":
                value = None
            else:
                try:
                    value = float(raw)
                except ValueError:
                    raise ParseError(f"unparseable value {raw!r}", line=line) from None
                if not np.isfinite(value):
                    raise ParseError(f"non-finite value {raw!r}", line=line)
            rows.append((stamp, value, line))
    if not rows:
        raise ParseError("file holds no data rows", line=1)

    rows.sort(key=lambda r: r[0])
    start = rows[0][0]
    step = float(spec.expected_step)
    tolerance = 1e-6 * step

    n = int(round((rows[-1][0] - start) / step)) + 1
    values = np.zeros(n)
    observed = np.zeros(n, dtype=bool)
    filled = np.zeros(n, dtype=bool)
    for stamp, value, line in rows:
        offset = (stamp - start) / step
        index = int(round(offset))
        if abs(offset - index) * step > tolerance or index < 0 or index >= n:
            raise CadenceError(
                f"timestamp is off the uniform grid (start={start}, step={step})",
                line=line)
        if filled[index]:
            raise DuplicateTimestampError("two rows share one timestamp", line=line)
        filled[index] = True
        if value is None:
            if spec.missing_policy == "reject":
                raise ParseError("blank value cell under missing_policy=reject",
                                 line=line)
        else:
            values[index] = value
            observed[index] = True

    if spec.missing_policy == "reject" and not filled.all():
        first_absent = int(np.argmax(~filled))
        after = next(line for stamp, _, line in rows
                     if int(round((stamp - start) / step)) > first_absent)
        raise CadenceError(
            f"missing timestamp at grid position {first_absent} "
            f"(expected {start + first_absent * step})", line=after)
    return TimeSeries(start_time=start, step=step, values=values, observed=observed)


def write_series_csv(series: TimeSeries, path, timestamp_column: str = "timestamp",
                     value_column: str = "value") -> None:
    """Emit a series as an epoch-seconds CSV; masked positions get blank cells."""
    def rows():
        yield (timestamp_column, value_column)
        for i in range(len(series)):
            stamp = float(series.timestamp(i))
            text = repr(int(stamp)) if stamp.is_integer() else repr(stamp)
            yield (text, repr(float(series.values[i])) if series.observed[i] else "")

    _atomic_write_csv(path, rows())


def _hours_to_samples(hours: float, step_seconds: float, path: str) -> int:
    samples = hours * 3600.0 / step_seconds
    rounded = int(round(samples))
    if rounded < 1:
        raise SchemaError(f"{hours} hours is below one sample at step "
                          f"{step_seconds}s", path=path)
    return rounded


def _expect(doc: dict, key: str, kinds, path: str, default=None, required=False):
    if key not in doc:
        if required:
            raise SchemaError("missing required field", path=path)
        return default
    value = doc[key]
    if not isinstance(value, kinds) or isinstance(value, bool):
        raise SchemaError(f"wrong type, expected {kinds}", path=path)
    return value


def load_config(path, step_seconds: float = 3600.0,
                seed_override: int | None = None) -> EvalConfig:
    """Load a run configuration, converting hour-form fields to samples.

    Seed priority: ``seed_override`` argument, then the file's ``seed``
    field, then the ``GAPGAUGE_SEED`` environment variable, then 0.
    """
    try:
        with open(path, encoding="utf-8") as handle:
            doc = json.load(handle)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}", path="$") from None
    if not isinstance(doc, dict):
        raise SchemaError("config root must be an object", path="$")
    version = _expect(doc, "schema_version", int, "schema_version", required=True)
    if version != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {version}",
                          path="schema_version")

    gap_hours = _expect(doc, "gap_hours", dict, "gap_hours", required=True)
    min_hours = _expect(gap_hours, "min", (int, float), "gap_hours.min", required=True)
    max_hours = _expect(gap_hours, "max", (int, float), "gap_hours.max", required=True)
    if min_hours > max_hours:
        raise SchemaError("gap_hours.min exceeds gap_hours.max",
                          path="gap_hours.min,gap_hours.max")
    min_len = _hours_to_samples(min_hours, step_seconds, "gap_hours.min")
    max_len = _hours_to_samples(max_hours, step_seconds, "gap_hours.max")

    if seed_override is not None:
        seed = int(seed_override)
    elif "seed" in doc:
        seed = _expect(doc, "seed", int, "seed", required=True)
    else:
        raw_seed = os.environ.get("GAPGAUGE_SEED", "0")
        try:
            seed = int(raw_seed)
        except ValueError:
            raise SchemaError(f"GAPGAUGE_SEED is not an integer: {raw_seed!r}",
                              path="seed") from None

    raw_imputers = _expect(doc, "imputers", list, "imputers", required=True)
    if not raw_imputers:
        raise SchemaError("at least one imputer is required", path="imputers")
    imputers = []
    for i, entry in enumerate(raw_imputers):
        where = f"imputers[{i}]"
        if not isinstance(entry, dict):
            raise SchemaError("imputer entry must be an object", path=where)
        kind = _expect(entry, "kind", str, f"{where}.kind", required=True)
        params = dict(_expect(entry, "params", dict, f"{where}.params", default={}))
        for hour_key, sample_key in _HOUR_PARAMS.get(kind, {}).items():
            if hour_key in params:
                hours = params.pop(hour_key)
                if not isinstance(hours, (int, float)) or isinstance(hours, bool):
                    raise SchemaError("hour-form parameter must be a number",
                                      path=f"{where}.params.{hour_key}")
                params[sample_key] = _hours_to_samples(
                    hours, step_seconds, f"{where}.params.{hour_key}")
        try:
            imputers.append(ImputerConfig(kind, params))
        except Exception as exc:
            raise SchemaError(f"invalid imputer config: {exc}",
                              path=f"{where}.params") from None

    try:
        return EvalConfig(
            imputers=imputers,
            n_gaps=_expect(doc, "n_gaps", int, "n_gaps", default=100),
            min_len=min_len,
            max_len=max_len,
            seed=seed,
            bins=_expect(doc, "bins", int, "bins", default=10),
            epsilon=_expect(doc, "epsilon", (int, float), "epsilon", default=1e-6),
            aggregation=_expect(doc, "aggregation", str, "aggregation",
                                default="exact"),
        )
    except Exception as exc:
        raise SchemaError(f"invalid configuration: {exc}", path="$") from None


def dump_config(config: EvalConfig, step_seconds: float = 3600.0) -> dict:
    """Inverse of :func:`load_config` on the canonical (hours) form."""
    imputers = []
    for imputer in config.imputers:
        params = dict(imputer.params)
        for hour_key, sample_key in _HOUR_PARAMS.get(imputer.kind, {}).items():
            if params.get(sample_key) is not None:
                params[hour_key] = params.pop(sample_key) * step_seconds / 3600.0
        imputers.append({"kind": imputer.kind, "params": params})
    return {
        "schema_version": SCHEMA_VERSION,
        "seed": config.seed,
        "n_gaps": config.n_gaps,
        "gap_hours": {"min": config.min_len * step_seconds / 3600.0,
                      "max": config.max_len * step_seconds / 3600.0},
        "bins": config.bins,
        "epsilon": config.epsilon,
        "aggregation": config.aggregation,
        "imputers": imputers,
    }


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def _atomic_write_csv(path, rows) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + f".tmp-{os.getpid()}")
    with open(tmp, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        for row in rows:
            writer.writerow(row)
    os.replace(tmp, path)


def _atomic_write_text(path, text: str) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + f".tmp-{os.getpid()}")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def write_records_csv(records: list[MetricRecord], path) -> None:
    def rows():
        yield RECORD_COLUMNS
        for r in records:
            yield (r.gap_id, r.imputer_id, str(r.gap_len),
                   _format_cell(r.wd), _format_cell(r.jsd),
                   _format_cell(r.rmse), _format_cell(r.mae),
                   r.error or "")

    _atomic_write_csv(path, rows())


def read_records_csv(path) -> list[MetricRecord]:
    records = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or tuple(header) != RECORD_COLUMNS:
            raise ParseError(f"unexpected records header {header!r}", line=1)
        for line, row in enumerate(reader, start=2):
            if len(row) != len(RECORD_COLUMNS):
                raise ParseError("wrong column count", line=line)
            gap_id, imputer_id, gap_len, wd, jsd, rmse_, mae_, error = row
            try:
                records.append(MetricRecord(
                    gap_id=gap_id, imputer_id=imputer_id, gap_len=int(gap_len),
                    wd=float(wd) if wd else None,
                    jsd=float(jsd) if jsd else None,
                    rmse=float(rmse_) if rmse_ else None,
                    mae=float(mae_) if mae_ else None,
                    error=error or None))
            except ValueError:
                raise ParseError("unparseable record row", line=line) from None
    return records


def write_aggregates_csv(rows: list[AggregateRow], path) -> None:
    def emit():
        yield AGGREGATE_COLUMNS
        for a in rows:
            yield (a.imputer_id, str(a.gap_len), repr(a.mean_wd), repr(a.mean_jsd),
                   repr(a.mean_rmse), repr(a.mean_mae), str(a.n), str(a.n_failed))

    _atomic_write_csv(path, emit())


def _plot_rows(records: list[MetricRecord], metric: str, imputer_ids: list[str]):
    """Plot-ready wide table: one row per gap size, one column per imputer."""
    exact = aggregate(records, "exact")
    table: dict[int, dict[str, float]] = {}
    for row in exact:
        table.setdefault(row.gap_len, {})[row.imputer_id] = getattr(row, f"mean_{metric}")
    yield ("gap_len", *imputer_ids)
    for gap_len in sorted(table):
        cells = [table[gap_len].get(i) for i in imputer_ids]
        yield (str(gap_len), *[_format_cell(c) for c in cells])


def emit_report(report: EvalReport, out_dir) -> list[Path]:
    """Write report.json plus the CSV set; every file lands atomically."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    json_path = out / "report.json"
    _atomic_write_text(json_path, json.dumps(report.to_json_dict(), indent=2) + "\n")
    written.append(json_path)

    records_path = out / "records.csv"
    write_records_csv(report.records, records_path)
    written.append(records_path)

    aggregates_path = out / "aggregates.csv"
    write_aggregates_csv(report.aggregates, aggregates_path)
    written.append(aggregates_path)

    imputer_ids = [c["imputer_id"] for c in report.provenance["config"]["imputers"]]
    for metric in ("wd", "jsd", "rmse", "mae"):
        plot_path = out / f"plot_{metric}.csv"
        _atomic_write_csv(plot_path, _plot_rows(report.records, metric, imputer_ids))
        written.append(plot_path)
    return written
