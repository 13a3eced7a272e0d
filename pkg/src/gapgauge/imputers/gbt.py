"""Least-squares gradient-boosted regression trees over causal features.

Each position is described by three features computed strictly from earlier
values: a trailing simple moving average, an exponentially weighted moving
average, and the hour of day.  Inside a gap there is no observed history, so
the fill is recursive: each prediction is appended to the history that
feeds the next position's features.
"""

from __future__ import annotations

import numpy as np

from ..errors import (DivergenceError, InvalidParameterError, TrainingError,
                      TrainingWindowError)
from ..gaps import GapSpec
from ..series import TimeSeries

DEFAULT_TRAIN_SPAN = 8760  # one year of hourly samples


class RegressionTree:
    """Depth-limited CART regression tree minimizing squared error.

    Splits are midpoints between adjacent distinct feature values; ties in
    gain resolve to the first feature and the lowest threshold, so fitting
    is deterministic.
    """

    def __init__(self, max_depth: int = 4, min_samples_leaf: int = 1):
        if max_depth < 1:
            raise InvalidParameterError("max_depth must be >= 1", max_depth=max_depth)
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self._feature: list[int] = []
        self._threshold: list[float] = []
        self._left: list[int] = []
        self._right: list[int] = []
        self._value: list[float] = []

    def fit(self, X, y) -> "RegressionTree":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        if X.ndim != 2 or len(X) != len(y) or len(y) == 0:
            raise TrainingError("need a non-empty aligned training set",
                                rows=len(y))
        self._feature, self._threshold = [], []
        self._left, self._right, self._value = [], [], []
        self._grow(X, y, np.arange(len(y)), depth=0)
        return self

    def _new_node(self, value: float) -> int:
        self._feature.append(-1)
        self._threshold.append(0.0)
        self._left.append(-1)
        self._right.append(-1)
        self._value.append(value)
        return len(self._value) - 1

    def _grow(self, X, y, idx, depth) -> int:
        node = self._new_node(float(y[idx].mean()))
        if depth >= self.max_depth or len(idx) < 2 * self.min_samples_leaf:
            return node
        split = self._best_split(X, y, idx)
        if split is None:
            return node
        feature, threshold = split
        mask = X[idx, feature] <= threshold
        self._feature[node] = feature
        self._threshold[node] = threshold
        self._left[node] = self._grow(X, y, idx[mask], depth + 1)
        self._right[node] = self._grow(X, y, idx[~mask], depth + 1)
        return node

    def _best_split(self, X, y, idx):
        best_gain = 0.0
        best = None
        total = float(y[idx].sum())
        n = len(idx)
        for feature in range(X.shape[1]):
            xs = X[idx, feature]
            order = np.argsort(xs, kind="stable")
            xs_sorted = xs[order]
            ys_sorted = y[idx][order]
            left_sum = np.cumsum(ys_sorted)[:-1]
            left_n = np.arange(1, n)
            right_sum = total - left_sum
            right_n = n - left_n
            # Gain in SSE reduction; the sum-of-squares term cancels.
            gain = (left_sum ** 2 / left_n + right_sum ** 2 / right_n
                    - total ** 2 / n)
            valid = (xs_sorted[1:] > xs_sorted[:-1]) \
                & (left_n >= self.min_samples_leaf) \
                & (right_n >= self.min_samples_leaf)
            gain = np.where(valid, gain, -np.inf)
            pos = int(np.argmax(gain))
            if gain[pos] > best_gain:
                best_gain = float(gain[pos])
                best = (feature, float((xs_sorted[pos] + xs_sorted[pos + 1]) / 2.0))
        return best

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        out = np.empty(len(X))
        for i, row in enumerate(X):
            node = 0
            while self._feature[node] >= 0:
                if row[self._feature[node]] <= self._threshold[node]:
                    node = self._left[node]
                else:
                    node = self._right[node]
            out[i] = self._value[node]
        return out


class GradientBoostedTrees:
    """Stagewise least-squares boosting: start from the target mean, then
    repeatedly fit a tree to the residuals and step by ``learning_rate``."""

    def __init__(self, trees: int = 100, max_depth: int = 4,
                 learning_rate: float = 0.1, subsample: float = 1.0,
                 rng: np.random.Generator | None = None):
        if trees < 1:
            raise InvalidParameterError("trees must be >= 1", trees=trees)
        if not 0.0 < learning_rate <= 1.0:
            raise InvalidParameterError("learning_rate must lie in (0, 1]",
                                        learning_rate=learning_rate)
        if not 0.0 < subsample <= 1.0:
            raise InvalidParameterError("subsample must lie in (0, 1]",
                                        subsample=subsample)
        self.trees = trees
        self.max_depth = max_depth
        self.learning_rate = learning_rate
        self.subsample = subsample
        self.rng = rng
        self.base = 0.0
        self.stages: list[RegressionTree] = []
        self.training_mse: list[float] = []

    def fit(self, X, y) -> "GradientBoostedTrees":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        if len(y) == 0:
            raise TrainingError("empty training set")
        self.base = float(y.mean())
        current = np.full(len(y), self.base)
        self.stages = []
        self.training_mse = []
        for _ in range(self.trees):
            residuals = y - current
            if self.subsample < 1.0:
                if self.rng is None:
                    raise InvalidParameterError("subsample < 1 requires an rng")
                size = max(1, int(round(self.subsample * len(y))))
                rows = np.sort(self.rng.choice(len(y), size=size, replace=False))
            else:
                rows = slice(None)
            tree = RegressionTree(max_depth=self.max_depth).fit(X[rows], residuals[rows])
            current = current + self.learning_rate * tree.predict(X)
            self.stages.append(tree)
            self.training_mse.append(float(np.mean((y - current) ** 2)))
        return self

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        out = np.full(len(X), self.base)
        for tree in self.stages:
            out += self.learning_rate * tree.predict(X)
        return out


def causal_features(values: np.ndarray, hours: np.ndarray,
                    sma_window: int, ewma_alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Feature rows and targets for positions 1..n-1 of a value array.

    Position t sees the trailing mean of up to ``sma_window`` earlier values
    and an EWMA carried over all earlier values, so features never look at
    the target or anything after it.
    """
    n = len(values)
    if n < 2:
        raise TrainingError("need at least two values to build features", rows=n)
    csum = np.concatenate([[0.0], np.cumsum(values)])
    t = np.arange(1, n)
    lo = np.maximum(t - sma_window, 0)
    sma = (csum[t] - csum[lo]) / (t - lo)
    ewma = np.empty(n)
    ewma[1] = values[0]
    for i in range(2, n):
        ewma[i] = ewma_alpha * values[i - 1] + (1.0 - ewma_alpha) * ewma[i - 1]
    X = np.column_stack([sma, ewma[1:], hours[1:].astype(float)])
    return X, values[1:].copy()


class _FeatureTracker:
    """Carries the SMA window and EWMA state across recursive gap fills."""

    def __init__(self, history: np.ndarray, sma_window: int, ewma_alpha: float):
        self.window = sma_window
        self.alpha = ewma_alpha
        self.recent = list(history[-sma_window:])
        self.ewma = float(history[0])
        for v in history[1:]:
            self.ewma = ewma_alpha * float(v) + (1.0 - ewma_alpha) * self.ewma

    def row(self, hour: int) -> np.ndarray:
        return np.array([sum(self.recent) / len(self.recent), self.ewma, float(hour)])

    def push(self, value: float) -> None:
        self.ewma = self.alpha * value + (1.0 - self.alpha) * self.ewma
        self.recent.append(value)
        if len(self.recent) > self.window:
            self.recent.pop(0)


def gbt_fill(masked: TimeSeries, gap: GapSpec, train_span: int = DEFAULT_TRAIN_SPAN,
             trees: int = 100, max_depth: int = 4, learning_rate: float = 0.1,
             subsample: float = 1.0, sma_window: int = 24, ewma_alpha: float = 0.3,
             seed: int = 0) -> np.ndarray:
    """Train on the window before the gap, then fill it recursively."""
    if sma_window < 1:
        raise InvalidParameterError("sma_window must be >= 1", sma_window=sma_window)
    if not 0.0 < ewma_alpha <= 1.0:
        raise InvalidParameterError("ewma_alpha must lie in (0, 1]",
                                    ewma_alpha=ewma_alpha)
    lo = gap.start_index - train_span
    if lo < 0:
        raise TrainingWindowError("training window underflows the series",
                                  gap_start=gap.start_index, train_span=train_span)
    if not masked.observed[lo:gap.start_index].all():
        raise TrainingWindowError("training window overlaps missing data",
                                  gap_start=gap.start_index, train_span=train_span)

    values = masked.values[lo:gap.start_index]
    hours = np.array([masked.hour_of_day(i) for i in range(lo, gap.start_index)])
    X, y = causal_features(values, hours, sma_window, ewma_alpha)
    rng = np.random.Generator(np.random.Philox(key=np.uint64(seed)))
    model = GradientBoostedTrees(trees=trees, max_depth=max_depth,
                                 learning_rate=learning_rate,
                                 subsample=subsample, rng=rng).fit(X, y)

    tracker = _FeatureTracker(values, sma_window, ewma_alpha)
    filled = np.empty(gap.length)
    for offset, i in enumerate(range(gap.start_index, gap.end_index)):
        prediction = float(model.predict(tracker.row(masked.hour_of_day(i))[None, :])[0])
        if not np.isfinite(prediction):
            raise DivergenceError("gradient boosting produced a non-finite fill",
                                  index=i)
        filled[offset] = prediction
        tracker.push(prediction)
    return filled
