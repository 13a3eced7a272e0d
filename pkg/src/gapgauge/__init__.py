"""gapgauge: score time-series gap imputation with and without ground truth.

The library injects reproducible artificial gaps into complete series, fills
them with several imputers, and scores each fill two ways: distribution
distances (1-D Wasserstein, Jensen-Shannon divergence) against the pre-gap
reference window, which need no ground truth, and classic RMSE/MAE against
the held-out values.  Rank agreement between the two families quantifies how
well the reference-window metrics stand in for the classic ones.
"""

from .errors import GapgaugeError
from .gaps import (PRNG_ALGORITHM, GapSet, GapSpec, apply_gaps,
                   gap_set_from_json, gap_set_to_json, generate_gaps,
                   pre_gap_window)
from .harness import (AggregateRow, EvalConfig, EvalReport, aggregate,
                      rank_agreement, required_history, run_evaluation)
from .imputers import (ArimaOrder, FittedArima, GradientBoostedTrees,
                       ImputationResult, ImputerConfig, RegressionTree,
                       arima_fill, fit_arima, forecast, gbt_fill, grid_search,
                       impute, imputer_kinds, polynomial_fill,
                       register_imputer, seasonal_naive_fill, select_order)
from .io import (IngestSpec, dump_config, emit_report, ingest_csv,
                 load_config, read_records_csv, write_series_csv)
from .metrics import (Histogram, MetricRecord, jsd, jsd_histograms, kl, mae,
                      rmse, shared_histogram, wasserstein_1d)
from .ranking import average_ranks, kendall, spearman
from .series import (EmpiricalSample, TimeSeries, observed_values,
                     slice_series, validate)
from .synth import SERIES_KINDS, synthesize_series

__version__ = "0.1.0"

__all__ = [
    "AggregateRow", "ArimaOrder", "EmpiricalSample", "EvalConfig",
    "EvalReport", "FittedArima", "GapSet", "GapSpec", "GapgaugeError",
    "GradientBoostedTrees", "Histogram", "ImputationResult", "ImputerConfig",
    "IngestSpec", "MetricRecord", "PRNG_ALGORITHM", "RegressionTree",
    "SERIES_KINDS", "TimeSeries", "aggregate", "apply_gaps", "arima_fill",
    "average_ranks", "dump_config", "emit_report", "fit_arima", "forecast",
    "gap_set_from_json", "gap_set_to_json", "gbt_fill", "generate_gaps",
    "grid_search", "impute", "imputer_kinds", "ingest_csv", "jsd",
    "jsd_histograms", "kendall", "kl", "load_config", "mae",
    "observed_values", "polynomial_fill", "pre_gap_window", "rank_agreement",
    "read_records_csv", "register_imputer", "required_history", "rmse",
    "run_evaluation", "seasonal_naive_fill", "select_order",
    "shared_histogram", "slice_series", "spearman", "synthesize_series",
    "validate", "wasserstein_1d", "write_series_csv",
]
