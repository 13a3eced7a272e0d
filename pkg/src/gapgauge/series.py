"""Uniformly sampled time series with an explicit missing mask.

A series is a start epoch, a positive step in seconds, a value array and a
boolean ``observed`` mask of the same length.  Timestamps are implied:
``t_i = start_time + i * step``.  A position with ``observed=False`` carries
no meaningful value and must never be consumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptySampleError, InvalidSampleError, RangeError


@dataclass
class TimeSeries:
    """Regularly sampled values plus a missing mask.

    Construction only coerces arrays; it does not enforce invariants, so that
    broken inputs can be inspected with :func:`validate`.  All operations in
    this module treat the series as read-only.
    """

    start_time: float
    step: float
    values: np.ndarray
    observed: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.observed = np.asarray(self.observed, dtype=bool)

    def __len__(self):
        return len(self.values)

    def timestamp(self, index: int) -> float:
        return self.start_time + index * self.step

    def hour_of_day(self, index: int) -> int:
        """Hour 0-23 of the implied timestamp (UTC)."""
        return int(self.timestamp(index) % 86400.0 // 3600.0)

    def copy(self) -> "TimeSeries":
        return TimeSeries(self.start_time, self.step,
                          self.values.copy(), self.observed.copy())

    @classmethod
    def fully_observed(cls, start_time: float, step: float, values) -> "TimeSeries":
        values = np.asarray(values, dtype=float)
        return cls(start_time, step, values, np.ones(len(values), dtype=bool))


@dataclass(frozen=True)
class EmpiricalSample:
    """An unordered bag of finite real values standing for a distribution."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or len(vals) == 0:
            raise EmptySampleError("empirical sample must hold at least one value")
        if not np.all(np.isfinite(vals)):
            raise InvalidSampleError("empirical sample contains non-finite values")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)


@dataclass
class ValidationReport:
    ok: bool
    violations: list[str] = field(default_factory=list)


def validate(series: TimeSeries) -> ValidationReport:
    """Check every series invariant; violations are data, not failures."""
    violations = []
    if not (series.step > 0):
        violations.append("non-positive step")
    if len(series.values) != len(series.observed):
        violations.append("length mismatch between values and observed mask")
    if len(series.values) < 1:
        violations.append("empty series")
    n = min(len(series.values), len(series.observed))
    if n and not np.all(np.isfinite(series.values[:n][series.observed[:n]])):
        violations.append("non-finite value at an observed position")
    if not np.isfinite(series.start_time):
        violations.append("non-finite start_time")
    return ValidationReport(ok=not violations, violations=violations)


def _check_window(series: TimeSeries, start_index: int, length: int) -> None:
    if start_index < 0:
        raise RangeError("start_index must be >= 0", start_index=start_index)
    if length < 1:
        raise RangeError("length must be >= 1", length=length)
    if start_index + length > len(series):
        raise RangeError("window end exceeds series length",
                         end=start_index + length, series_length=len(series))


def slice_series(series: TimeSeries, start_index: int, length: int) -> TimeSeries:
    """Copy out ``length`` samples from ``start_index``; the original is untouched."""
    _check_window(series, start_index, length)
    return TimeSeries(
        start_time=series.start_time + start_index * series.step,
        step=series.step,
        values=series.values[start_index:start_index + length].copy(),
        observed=series.observed[start_index:start_index + length].copy(),
    )


def observed_values(series: TimeSeries, start_index: int, length: int) -> EmpiricalSample:
    """Values at observed positions within a window, in index order.

    Consumers treat the result as an unordered sample.  A fully missing
    window raises :class:`EmptySampleError`.
    """
    _check_window(series, start_index, length)
    mask = series.observed[start_index:start_index + length]
    if not mask.any():
        raise EmptySampleError("window contains no observed positions",
                               start_index=start_index, length=length)
    return EmpiricalSample(series.values[start_index:start_index + length][mask])
