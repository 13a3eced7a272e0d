"""Gap-filling methods behind one uniform interface.

Every imputer consumes a masked series plus a gap spec and returns exactly
``gap.length`` finite values.  Methods register under a ``kind`` string;
:class:`ImputerConfig` validates and normalizes kind-specific parameters so
that equal configurations always produce equal ``imputer_id`` strings.  New
methods (e.g. neural ones) plug in through :func:`register_imputer` without
touching the harness.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..errors import (ConfigError, GapgaugeError, InvalidParameterError,
                      SearchError, ShapeError)
from ..gaps import GapSet, GapSpec, apply_gaps
from ..metrics import rmse
from ..series import TimeSeries
from .arima import (ArimaOrder, FittedArima, arima_fill, fit_arima, forecast,
                    select_order)
from .gbt import (GradientBoostedTrees, RegressionTree, causal_features,
                  gbt_fill)
from .polynomial import polynomial_fill
from .seasonal import seasonal_naive_fill

__all__ = [
    "ArimaOrder", "FittedArima", "GradientBoostedTrees", "ImputationResult",
    "ImputerConfig", "RegressionTree", "arima_fill", "causal_features",
    "derive_seed", "fit_arima", "forecast", "gbt_fill", "grid_search",
    "impute", "imputer_kinds", "polynomial_fill", "register_imputer",
    "seasonal_naive_fill", "select_order",
]


def derive_seed(master: int, *parts: int) -> int:
    """Deterministic, platform-stable child seed for one (gap, imputer) job."""
    state = np.random.SeedSequence([int(master), *map(int, parts)]).generate_state(1)
    return int(state[0])


def _require(condition: bool, message: str, **context):
    if not condition:
        raise InvalidParameterError(message, **context)


def _int_param(params, name, default, minimum=None):
    value = params.get(name, default)
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise InvalidParameterError(f"{name} must be an integer", value=value)
    value = int(value)
    if minimum is not None:
        _require(value >= minimum, f"{name} must be >= {minimum}", value=value)
    return value


def _float_param(params, name, default, low=None, high=None, low_open=False):
    value = params.get(name, default)
    if not isinstance(value, (int, float, np.floating, np.integer)) or isinstance(value, bool):
        raise InvalidParameterError(f"{name} must be a number", value=value)
    value = float(value)
    if low is not None:
        ok = value > low if low_open else value >= low
        _require(ok, f"{name} out of range", value=value)
    if high is not None:
        _require(value <= high, f"{name} out of range", value=value)
    return value


def _check_known(params: dict, known: set[str], kind: str):
    unknown = sorted(set(params) - known)
    if unknown:
        raise ConfigError(f"unknown parameters for imputer kind {kind!r}",
                          unknown=unknown)


def _normalize_polynomial(params: dict) -> dict:
    _check_known(params, {"order", "context"}, "polynomial")
    out = {"order": _int_param(params, "order", 3, minimum=1)}
    context = params.get("context")
    if context is not None:
        context = _int_param(params, "context", None, minimum=1)
    out["context"] = context
    return out


def _normalize_seasonal(params: dict) -> dict:
    _check_known(params, {"season"}, "seasonal_naive")
    return {"season": _int_param(params, "season", 24, minimum=2)}


def _normalize_arima(params: dict) -> dict:
    _check_known(params, {"train_span", "p_max", "d_max", "q_max"}, "arima")
    return {
        "train_span": _int_param(params, "train_span", 1008, minimum=20),
        "p_max": _int_param(params, "p_max", 3, minimum=0),
        "d_max": _int_param(params, "d_max", 2, minimum=0),
        "q_max": _int_param(params, "q_max", 3, minimum=0),
    }


def _normalize_sarima(params: dict) -> dict:
    _check_known(params, {"train_span", "p_max", "d_max", "q_max",
                          "P_max", "D_max", "Q_max", "season"}, "sarima")
    return {
        "train_span": _int_param(params, "train_span", 1008, minimum=20),
        "p_max": _int_param(params, "p_max", 3, minimum=0),
        "d_max": _int_param(params, "d_max", 2, minimum=0),
        "q_max": _int_param(params, "q_max", 3, minimum=0),
        "P_max": _int_param(params, "P_max", 1, minimum=0),
        "D_max": _int_param(params, "D_max", 1, minimum=0),
        "Q_max": _int_param(params, "Q_max", 1, minimum=0),
        "season": _int_param(params, "season", 24, minimum=2),
    }


def _normalize_gbt(params: dict) -> dict:
    _check_known(params, {"train_span", "trees", "max_depth", "learning_rate",
                          "subsample", "sma_window", "ewma_alpha"}, "gbt")
    return {
        "train_span": _int_param(params, "train_span", 8760, minimum=2),
        "trees": _int_param(params, "trees", 100, minimum=1),
        "max_depth": _int_param(params, "max_depth", 4, minimum=1),
        "learning_rate": _float_param(params, "learning_rate", 0.1,
                                      low=0.0, high=1.0, low_open=True),
        "subsample": _float_param(params, "subsample", 1.0,
                                  low=0.0, high=1.0, low_open=True),
        "sma_window": _int_param(params, "sma_window", 24, minimum=1),
        "ewma_alpha": _float_param(params, "ewma_alpha", 0.3,
                                   low=0.0, high=1.0, low_open=True),
    }


def _fill_polynomial(masked, gap, params, seed):
    return polynomial_fill(masked, gap, order=params["order"],
                           context=params["context"])


def _fill_seasonal(masked, gap, params, seed):
    return seasonal_naive_fill(masked, gap, season=params["season"])


def _fill_arima(masked, gap, params, seed):
    return arima_fill(masked, gap, train_span=params["train_span"],
                      p_max=params["p_max"], d_max=params["d_max"],
                      q_max=params["q_max"])


def _fill_sarima(masked, gap, params, seed):
    seasonal = (params["P_max"], params["D_max"], params["Q_max"], params["season"])
    return arima_fill(masked, gap, train_span=params["train_span"],
                      p_max=params["p_max"], d_max=params["d_max"],
                      q_max=params["q_max"], seasonal=seasonal)


def _fill_gbt(masked, gap, params, seed):
    return gbt_fill(masked, gap, train_span=params["train_span"],
                    trees=params["trees"], max_depth=params["max_depth"],
                    learning_rate=params["learning_rate"],
                    subsample=params["subsample"],
                    sma_window=params["sma_window"],
                    ewma_alpha=params["ewma_alpha"], seed=seed)


@dataclass(frozen=True)
class _ImputerKind:
    fill: Callable
    normalize: Callable[[dict], dict]


_REGISTRY: dict[str, _ImputerKind] = {
    "polynomial": _ImputerKind(_fill_polynomial, _normalize_polynomial),
    "seasonal_naive": _ImputerKind(_fill_seasonal, _normalize_seasonal),
    "arima": _ImputerKind(_fill_arima, _normalize_arima),
    "sarima": _ImputerKind(_fill_sarima, _normalize_sarima),
    "gbt": _ImputerKind(_fill_gbt, _normalize_gbt),
}


def register_imputer(kind: str, fill: Callable,
                     normalize: Callable[[dict], dict] | None = None) -> None:
    """Extension seam: add a new kind callable as fill(masked, gap, params, seed)."""
    _REGISTRY[kind] = _ImputerKind(fill, normalize or (lambda params: dict(params)))


def imputer_kinds() -> tuple[str, ...]:
    return tuple(_REGISTRY)


@dataclass
class ImputerConfig:
    """A kind plus normalized, validated kind-specific parameters."""

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in _REGISTRY:
            raise ConfigError(f"unknown imputer kind {self.kind!r}",
                              known=sorted(_REGISTRY))
        self.params = _REGISTRY[self.kind].normalize(dict(self.params))

    @property
    def imputer_id(self) -> str:
        canon = json.dumps(self.params, sort_keys=True, separators=(",", ":"))
        digest = hashlib.sha256(canon.encode()).hexdigest()[:8]
        return f"{self.kind}-{digest}"


@dataclass(frozen=True)
class ImputationResult:
    imputer_id: str
    gap: GapSpec
    filled: np.ndarray

    def __post_init__(self):
        filled = np.asarray(self.filled, dtype=float)
        if len(filled) != self.gap.length:
            raise ShapeError("fill length must match the gap",
                             filled=len(filled), gap=self.gap.length)
        if not np.all(np.isfinite(filled)):
            raise ShapeError("fill contains non-finite values")
        object.__setattr__(self, "filled", filled)


def impute(masked: TimeSeries, gap: GapSpec, config: ImputerConfig,
           seed: int = 0) -> ImputationResult:
    """Run one imputer on one gap; deterministic given (inputs, config, seed)."""
    filled = _REGISTRY[config.kind].fill(masked, gap, config.params, seed)
    return ImputationResult(imputer_id=config.imputer_id, gap=gap, filled=filled)


def grid_search(series: TimeSeries, validation_gaps: GapSet, kind: str,
                grid: dict[str, list], seed: int = 0) -> ImputerConfig:
    """Pick the config with the lowest mean RMSE over held-out validation gaps.

    ``grid`` maps parameter names to candidate values; the cartesian product
    is evaluated exhaustively in declared order and ties keep the earlier
    config.  Each validation gap is imputed on a view of ``series`` where
    only that gap is masked, mirroring the evaluation protocol.  Validation
    gaps must be kept disjoint from any gaps used for final evaluation, or
    the chosen config is tuned on its own test set.
    """
    if not grid or any(len(v) == 0 for v in grid.values()):
        raise SearchError("grid must be non-empty", grid=sorted(grid))
    names = list(grid)
    failures: dict[str, str] = {}
    best: tuple[float, ImputerConfig] | None = None
    for combo in itertools.product(*(grid[name] for name in names)):
        params = dict(zip(names, combo))
        label = json.dumps(params, sort_keys=True, default=str)
        try:
            config = ImputerConfig(kind, params)
            errors = []
            for i, gap in enumerate(validation_gaps):
                view, truth = apply_gaps(
                    series, GapSet((gap,), seed=validation_gaps.seed,
                                   source_length=len(series)))
                result = impute(view, gap, config, seed=derive_seed(seed, i))
                errors.append(rmse(result.filled, truth[gap]))
            score = float(np.mean(errors))
        except GapgaugeError as exc:
            failures[label] = str(exc)
            continue
        if best is None or score < best[0]:
            best = (score, config)
    if best is None:
        raise SearchError("every grid configuration failed", failures=failures)
    return best[1]
