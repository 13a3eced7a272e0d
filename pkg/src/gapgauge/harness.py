"""End-to-end evaluation protocol.

Generate reproducible artificial gaps in a complete series, run every
configured imputer on every gap, score each fill with both metric families
(WD/JSD against the pre-gap window, RMSE/MAE against held-out truth),
aggregate per gap size, and measure rank agreement between the families.

Each gap is imputed in isolation: the imputer sees the original series with
only that gap masked, so one method's training window is never corrupted by
a different artificial gap.  Gap placement reserves enough head-of-series
history for the largest training span among the configured imputers.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from .errors import (ConfigError, DegenerateError, GapgaugeError,
                     InvalidParameterError, ShapeError)
from .gaps import PRNG_ALGORITHM, GapSet, GapSpec, apply_gaps, generate_gaps, pre_gap_window
from .imputers import ImputerConfig, derive_seed, impute
from .metrics import MetricRecord, jsd, mae, rmse, wasserstein_1d
from .ranking import kendall, spearman
from .series import TimeSeries, validate

AGGREGATIONS = ("exact", "quartile")
METRIC_PAIRINGS = (("wd", "rmse"), ("wd", "mae"), ("jsd", "rmse"), ("jsd", "mae"))


@dataclass
class EvalConfig:
    imputers: list[ImputerConfig]
    n_gaps: int = 100
    min_len: int = 2
    max_len: int = 48
    seed: int = 0
    bins: int = 10
    epsilon: float = 1e-6
    aggregation: str = "exact"

    def __post_init__(self):
        if self.n_gaps < 1:
            raise ConfigError("n_gaps must be >= 1", n_gaps=self.n_gaps)
        if not 1 <= self.min_len <= self.max_len:
            raise ConfigError("need 1 <= min_len <= max_len",
                              min_len=self.min_len, max_len=self.max_len)
        if not self.imputers:
            raise ConfigError("need at least one imputer")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit an unsigned 64-bit integer",
                              seed=self.seed)
        if self.bins < 2:
            raise ConfigError("bins must be >= 2", bins=self.bins)
        if not self.epsilon > 0:
            raise ConfigError("epsilon must be > 0", epsilon=self.epsilon)
        if self.aggregation not in AGGREGATIONS:
            raise ConfigError("unknown aggregation rule",
                              aggregation=self.aggregation, known=AGGREGATIONS)

    def to_json_dict(self) -> dict:
        return {
            "n_gaps": self.n_gaps,
            "min_len": self.min_len,
            "max_len": self.max_len,
            "seed": self.seed,
            "bins": self.bins,
            "epsilon": self.epsilon,
            "aggregation": self.aggregation,
            "imputers": [{"kind": c.kind, "params": c.params,
                          "imputer_id": c.imputer_id} for c in self.imputers],
        }


@dataclass(frozen=True)
class AggregateRow:
    imputer_id: str
    gap_len: int
    mean_wd: float
    mean_jsd: float
    mean_rmse: float
    mean_mae: float
    n: int
    n_failed: int


@dataclass
class EvalReport:
    records: list[MetricRecord]
    aggregates: list[AggregateRow]
    agreement: dict | None
    provenance: dict
    gaps: GapSet = field(default=None)

    def to_json_dict(self) -> dict:
        return {
            "provenance": self.provenance,
            "records": [vars(r) for r in self.records],
            "aggregates": [vars(a) for a in self.aggregates],
            "rank_agreement": self.agreement,
            "gaps": None if self.gaps is None else {
                "seed": self.gaps.seed,
                "source_length": self.gaps.source_length,
                "gaps": [{"start": g.start_index, "len": g.length} for g in self.gaps],
            },
        }


def required_history(config: ImputerConfig, max_gap_len: int) -> int:
    """Head-of-series samples an imputer may need before any gap."""
    params = config.params
    if config.kind == "polynomial":
        context = params.get("context")
        return context if context else max(2 * max_gap_len, 4)
    if config.kind == "seasonal_naive":
        season = params["season"]
        # worst case the ancestor must clear the whole gap
        return season * ((max_gap_len + season - 1) // season + 1)
    if config.kind in ("arima", "sarima", "gbt"):
        return params["train_span"]
    return int(params.get("required_history", 0))


def _single_gap_view(series: TimeSeries, gap: GapSpec) -> TimeSeries:
    view = series.copy()
    view.observed[gap.start_index:gap.end_index] = False
    return view


def run_evaluation(series: TimeSeries, config: EvalConfig,
                   parallel: bool | int = False) -> EvalReport:
    """Run the full protocol; per-(gap, imputer) failures never abort the run.

    ``parallel`` may be True or a worker count; parallel and sequential
    executions produce identical reports because every job is pure and the
    record order is fixed (gaps by position, imputers in declared order).
    """
    check = validate(series)
    if not check.ok:
        raise ConfigError("series failed validation", violations=check.violations)
    if not series.observed.all():
        raise ConfigError("evaluation needs a fully observed series")

    reserve = max(required_history(c, config.max_len) for c in config.imputers)
    if reserve + 2 * config.max_len >= len(series):
        raise ConfigError("series too short for training spans plus gap packing",
                          reserve=reserve, series_length=len(series))
    gap_set = generate_gaps(len(series), config.n_gaps, config.min_len,
                            config.max_len, config.seed, min_start=reserve)
    masked, truth = apply_gaps(series, gap_set)
    references = [pre_gap_window(masked, gap) for gap in gap_set]
    gap_ids = [f"gap{i:03d}" for i in range(len(gap_set))]

    jobs = [(gi, mi) for gi in range(len(gap_set))
            for mi in range(len(config.imputers))]

    def run_job(job: tuple[int, int]) -> MetricRecord:
        gi, mi = job
        gap = gap_set.gaps[gi]
        imputer = config.imputers[mi]
        try:
            view = _single_gap_view(series, gap)
            result = impute(view, gap, imputer,
                            seed=derive_seed(config.seed, gi, mi))
            filled = result.filled
            return MetricRecord(
                gap_id=gap_ids[gi], imputer_id=imputer.imputer_id,
                gap_len=gap.length,
                wd=wasserstein_1d(filled, references[gi]),
                jsd=jsd(filled, references[gi],
                        bins=config.bins, epsilon=config.epsilon),
                rmse=rmse(filled, truth[gap]),
                mae=mae(filled, truth[gap]))
        except GapgaugeError as exc:
            return MetricRecord(gap_id=gap_ids[gi], imputer_id=imputer.imputer_id,
                                gap_len=gap.length,
                                error=f"{exc.code}: {exc.message}")

    if parallel:
        workers = parallel if isinstance(parallel, int) and parallel > 1 else None
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(run_job, jobs))
    else:
        records = [run_job(job) for job in jobs]

    aggregates = aggregate(records, config.aggregation)
    try:
        agreement = rank_agreement(aggregates)
    except DegenerateError as exc:
        agreement = {"error": str(exc)}

    provenance = {
        "seed": config.seed,
        "prng_algorithm": PRNG_ALGORITHM,
        "config": config.to_json_dict(),
        "series": {"start_time": series.start_time, "step": series.step,
                   "length": len(series)},
        "history_reserve": reserve,
        "created_utc": datetime.now(timezone.utc).isoformat(),
    }
    return EvalReport(records=records, aggregates=aggregates,
                      agreement=agreement, provenance=provenance, gaps=gap_set)


def aggregate(records: list[MetricRecord], bucketing: str = "exact") -> list[AggregateRow]:
    """Arithmetic means of each metric per (imputer, gap-size bucket).

    ``exact`` buckets by gap length in samples; ``quartile`` buckets by
    quartile of the observed gap-length distribution, labelled by each
    bucket's largest length.  Failed records are excluded from means and
    counted in ``n_failed``; buckets with no successes are omitted.
    """
    if not records:
        raise InvalidParameterError("no records to aggregate")
    if bucketing not in AGGREGATIONS:
        raise InvalidParameterError("unknown aggregation rule", bucketing=bucketing)

    if bucketing == "exact":
        def bucket_of(record):
            return record.gap_len
    else:
        all_lengths = np.array([r.gap_len for r in records])
        edges = np.quantile(all_lengths, [0.25, 0.5, 0.75])
        quartile = {length: int(np.searchsorted(edges, length, side="left"))
                    for length in np.unique(all_lengths)}
        label = {}  # quartile index -> largest gap length it holds
        for length, q in quartile.items():
            label[q] = max(label.get(q, 0), int(length))

        def bucket_of(record):
            return label[quartile[record.gap_len]]

    groups: dict[tuple[str, int], list[MetricRecord]] = {}
    order: list[tuple[str, int]] = []
    for record in records:
        key = (record.imputer_id, bucket_of(record))
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(record)

    rows = []
    for imputer_id, bucket in sorted(order, key=lambda k: (k[0], k[1])):
        members = groups[(imputer_id, bucket)]
        ok = [r for r in members if not r.failed]
        n_failed = len(members) - len(ok)
        if not ok:
            continue
        rows.append(AggregateRow(
            imputer_id=imputer_id, gap_len=bucket,
            mean_wd=float(np.mean([r.wd for r in ok])),
            mean_jsd=float(np.mean([r.jsd for r in ok])),
            mean_rmse=float(np.mean([r.rmse for r in ok])),
            mean_mae=float(np.mean([r.mae for r in ok])),
            n=len(ok), n_failed=n_failed))
    return rows


def rank_agreement(aggregates: list[AggregateRow]) -> dict:
    """Spearman and Kendall agreement between metric-family rankings.

    Imputers are ranked (lower is better) by each no-ground-truth metric and
    each ground-truth metric; every pairing is reported per gap size (sizes
    where all imputers have successes) and pooled over all records.
    """
    imputer_ids = []
    for row in aggregates:
        if row.imputer_id not in imputer_ids:
            imputer_ids.append(row.imputer_id)
    if len(imputer_ids) < 2:
        raise DegenerateError("rank agreement needs at least two imputers",
                              found=len(imputer_ids))

    def pair_block(scores: dict[str, dict[str, float]]) -> dict:
        block = {}
        for no_gt, gt in METRIC_PAIRINGS:
            x = [scores[i][f"mean_{no_gt}"] for i in imputer_ids]
            y = [scores[i][f"mean_{gt}"] for i in imputer_ids]
            try:
                block[f"{no_gt}_vs_{gt}"] = {"spearman": spearman(x, y),
                                             "kendall": kendall(x, y)}
            except ShapeError:
                # all scores tied on one side: the correlation is undefined
                block[f"{no_gt}_vs_{gt}"] = {"spearman": None, "kendall": None}
        return block

    by_size: dict[int, dict[str, dict]] = {}
    for row in aggregates:
        by_size.setdefault(row.gap_len, {})[row.imputer_id] = vars(row)

    per_size = {}
    for size in sorted(by_size):
        if set(by_size[size]) == set(imputer_ids):
            per_size[str(size)] = pair_block(by_size[size])

    pooled_scores = {}
    for imputer_id in imputer_ids:
        rows = [r for r in aggregates if r.imputer_id == imputer_id]
        total = sum(r.n for r in rows)
        pooled_scores[imputer_id] = {
            f"mean_{m}": sum(getattr(r, f"mean_{m}") * r.n for r in rows) / total
            for m in ("wd", "jsd", "rmse", "mae")}
    return {"pooled": pair_block(pooled_scores), "per_gap_len": per_size}
