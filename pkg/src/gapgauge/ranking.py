"""Rank correlation between two scorings of the same items.

Used to quantify how closely the ground-truth-free metrics order imputers
the way the ground-truth metrics do.  Ties receive average ranks; Kendall's
coefficient is the tie-corrected tau-b, which reduces to the plain tau when
there are no ties.
"""

from __future__ import annotations

import numpy as np

from .errors import ShapeError


def average_ranks(scores) -> np.ndarray:
    """Ranks 1..n of the scores in ascending order, ties averaged."""
    scores = np.asarray(scores, dtype=float)
    order = np.argsort(scores, kind="stable")
    ranks = np.empty(len(scores), dtype=float)
    i = 0
    while i < len(scores):
        j = i
        while j + 1 < len(scores) and scores[order[j + 1]] == scores[order[i]]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(x, y) -> float:
    """Spearman rank correlation of two score vectors.

    Without ties this is ``1 - 6*sum(d^2) / (n*(n^2-1))`` on the rank
    differences d; with ties it falls back to the Pearson correlation of
    the average ranks.
    """
    rx, ry = _paired_ranks(x, y)
    n = len(rx)
    if _has_ties(rx) or _has_ties(ry):
        return _pearson(rx, ry)
    d = rx - ry
    return 1.0 - 6.0 * float(np.sum(d * d)) / (n * (n * n - 1))


def kendall(x, y) -> float:
    """Kendall tau-b of two score vectors."""
    rx, ry = _paired_ranks(x, y)
    n = len(rx)
    concordant = discordant = ties_x = ties_y = 0
    for i in range(n):
        for j in range(i + 1, n):
            a = rx[i] - rx[j]
            b = ry[i] - ry[j]
            if a == 0 and b == 0:
                continue
            if a == 0:
                ties_x += 1
            elif b == 0:
                ties_y += 1
            elif (a > 0) == (b > 0):
                concordant += 1
            else:
                discordant += 1
    denom = np.sqrt((concordant + discordant + ties_x)
                    * (concordant + discordant + ties_y))
    if denom == 0:
        raise ShapeError("rank correlation undefined: all pairs tied")
    return float((concordant - discordant) / denom)


def _paired_ranks(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ShapeError("score vectors must be 1-D and equally long",
                         x=len(x), y=len(y))
    if len(x) < 2:
        raise ShapeError("need at least two items to correlate", n=len(x))
    return average_ranks(x), average_ranks(y)


def _has_ties(ranks: np.ndarray) -> bool:
    return len(np.unique(ranks)) != len(ranks)


def _pearson(a: np.ndarray, b: np.ndarray) -> float:
    a = a - a.mean()
    b = b - b.mean()
    denom = np.sqrt(np.sum(a * a) * np.sum(b * b))
    if denom == 0:
        raise ShapeError("rank correlation undefined: constant ranks")
    return float(np.sum(a * b) / denom)
