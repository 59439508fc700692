"""Pure-Python numeric kernels.

Reference twin of the compiled ``_native`` extension. Both backends perform
the same floating-point operations in the same order, so results are
bit-identical; keep any change mirrored in ``_native.pyx``.
"""

from __future__ import annotations

import math
from typing import Sequence

BACKEND = "python"


def evaluate_matrix(
    weights: Sequence[float], scores: Sequence[float], n_alternatives: int
) -> list[float]:
    """Weighted-sum evaluation of each alternative.

    ``scores`` is row-major criterion-by-alternative; the result has one
    entry per alternative: sum over criteria of weight * score.
    """
    n_criteria = len(weights)
    out = [0.0] * n_alternatives
    for a in range(n_alternatives):
        total = 0.0
        for c in range(n_criteria):
            total += weights[c] * scores[c * n_alternatives + a]
        out[a] = total
    return out


def abs_differences(left: Sequence[float], right: Sequence[float]) -> list[float]:
    """Componentwise |left - right|."""
    return [abs(left[i] - right[i]) for i in range(len(left))]


def rms_distance(left: Sequence[float], right: Sequence[float]) -> float:
    """Root-mean-square distance between two equal-length vectors."""
    n = len(left)
    total = 0.0
    for i in range(n):
        diff = left[i] - right[i]
        total += diff * diff
    return math.sqrt(total / n)


def social_weights(
    distances: Sequence[float],
    max_distance: float,
    consensus_level: float,
    literal: bool,
    epsilon: float,
) -> list[float]:
    """Exponentially decaying weight per distance; 1 within the tolerated band."""
    out = [1.0] * len(distances)
    for i, d in enumerate(distances):
        if d > max_distance + epsilon:
            excess = d - max_distance
            if literal:
                out[i] = math.exp(-(consensus_level * excess))
            else:
                out[i] = math.exp(-excess)
    return out


def weighted_totals(
    values: Sequence[float], weights: Sequence[float], n_rows: int, n_cols: int
) -> list[float]:
    """Column sums of the elementwise product of two row-major matrices.

    Rows are accumulated in order, so the summation order is fixed.
    """
    totals = [0.0] * n_cols
    for r in range(n_rows):
        base = r * n_cols
        for a in range(n_cols):
            totals[a] += values[base + a] * weights[base + a]
    return totals
