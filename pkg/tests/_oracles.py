"""Independent reference computations the implementation is checked against.

Nothing here may share code with the library paths under test: the
transport cost is solved as a coupling problem (permutation enumeration for
equal sizes, an explicit linear program otherwise), divergences by direct
summation, and forecasts by a hand-rolled recursion.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from scipy.optimize import linprog


def transport_cost_bruteforce(p, q) -> float:
    """Minimum-cost coupling between two equal-mass empirical distributions.

    Equal sizes: enumerate every assignment (n! couplings) and take the
    cheapest.  Unequal sizes: solve the transport linear program over the
    full coupling polytope with atom masses 1/n and 1/m.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    n, m = len(p), len(q)
    if n == m:
        best = math.inf
        for perm in itertools.permutations(range(n)):
            cost = sum(abs(p[i] - q[perm[i]]) for i in range(n)) / n
            best = min(best, cost)
        return best

    cost = np.abs(p[:, None] - q[None, :]).ravel()
    # Row-sum and column-sum constraints on the n*m coupling variables.
    a_eq = np.zeros((n + m, n * m))
    for i in range(n):
        a_eq[i, i * m:(i + 1) * m] = 1.0
    for j in range(m):
        a_eq[n + j, j::m] = 1.0
    b_eq = np.concatenate([np.full(n, 1.0 / n), np.full(m, 1.0 / m)])
    result = linprog(cost, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    assert result.success, result.message
    return float(result.fun)


def kl_direct(p_mass, q_mass) -> float:
    """Relative entropy in bits by direct summation."""
    total = 0.0
    for pi, qi in zip(p_mass, q_mass):
        if pi > 0:
            total += pi * math.log2(pi / qi)
    return total


def jsd_direct(p_mass, q_mass) -> float:
    """Jensen-Shannon divergence in bits by direct summation."""
    mix = [(pi + qi) / 2.0 for pi, qi in zip(p_mass, q_mass)]
    return 0.5 * kl_direct(p_mass, mix) + 0.5 * kl_direct(q_mass, mix)


def arima_forecast_by_hand(fitted, steps: int) -> np.ndarray:
    """Re-run the forecast recursion from the fitted coefficients alone.

    Independently re-derives the differenced series from the training
    values, steps the additive seasonal ARMA recursion with zero future
    innovations, then un-differences by explicit back-substitution.
    """
    order = fitted.order
    levels = [np.asarray(fitted._levels[0], dtype=float)]
    for _ in range(order.d):
        levels.append(np.diff(levels[-1]))
    for _ in range(order.D):
        levels.append(levels[-1][order.s:] - levels[-1][:-order.s])

    w = list(levels[-1])
    e = list(fitted.innovations)
    forecasts = []
    for _ in range(steps):
        value = fitted.intercept
        for lag in range(1, order.p + 1):
            value += fitted.ar[lag - 1] * w[-lag]
        for j in range(1, order.P + 1):
            value += fitted.sar[j - 1] * w[-j * order.s]
        for lag in range(1, order.q + 1):
            value += fitted.ma[lag - 1] * e[-lag]
        for j in range(1, order.Q + 1):
            value += fitted.sma[j - 1] * e[-j * order.s]
        w.append(value)
        e.append(0.0)
        forecasts.append(value)

    lags = [1] * order.d + [order.s] * order.D
    ext = forecasts
    for depth in range(len(lags) - 1, -1, -1):
        parent = list(levels[depth])
        undone = []
        for value in ext:
            restored = value + parent[-lags[depth]]
            undone.append(restored)
            parent.append(restored)
        ext = undone
    return np.asarray(ext)


def best_single_split_sse(x, y) -> float:
    """Exhaustive search over thresholds for the best one-split regressor."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)

    def sse(values):
        return float(np.sum((values - values.mean()) ** 2)) if len(values) else 0.0

    best = sse(y)
    for threshold in np.unique(x):
        left = y[x <= threshold]
        right = y[x > threshold]
        if len(left) and len(right):
            best = min(best, sse(left) + sse(right))
    return best
