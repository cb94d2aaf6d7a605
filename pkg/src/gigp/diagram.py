"""Frequency tables, Young diagram boundaries and the empirical processes.

A frequency table {j: M_j} of counts-of-counts is read as a Young
diagram: Y(x) = #{sources with value >= x} is its upper boundary, a
right-continuous step function with total width M = sum M_j and area
N = sum j M_j (where j = 0 entries add sources but no area).
"""

from __future__ import annotations

import math
from typing import Callable, Iterable, Mapping

import numpy as np


class YoungBoundary:
    """Evaluation cache for Y(x): sorted support plus suffix counts."""

    __slots__ = ("support", "suffix")

    def __init__(self, support: np.ndarray, suffix: np.ndarray):
        self.support = support
        self.suffix = suffix

    def at(self, x) -> np.ndarray | int:
        """Y(x) = sum of counts over support values >= x; vectorized in x."""
        idx = np.searchsorted(self.support, np.asarray(x), side="left")
        out = self.suffix[idx]
        if np.ndim(x) == 0:
            return int(out)
        return out


class FrequencyTable:
    """Immutable counts-of-counts {value j >= 0: multiplicity M_j >= 1}."""

    __slots__ = ("counts", "M", "N", "_boundary")

    def __init__(self, counts: Mapping[int, int]):
        cleaned = {}
        for j, m in counts.items():
            if int(j) != j or j < 0:
                raise ValueError("table keys must be nonnegative integers")
            if int(m) != m or m < 0:
                raise ValueError("table counts must be nonnegative integers")
            if m > 0:
                cleaned[int(j)] = int(m)
        self.counts = dict(sorted(cleaned.items()))
        self.M = sum(self.counts.values())
        self.N = sum(j * m for j, m in self.counts.items())
        support = np.fromiter(self.counts.keys(), dtype=np.int64, count=len(self.counts))
        mults = np.fromiter(self.counts.values(), dtype=np.int64, count=len(self.counts))
        suffix = np.concatenate([np.cumsum(mults[::-1])[::-1], [0]])
        self._boundary = YoungBoundary(support, suffix)

    def boundary(self) -> YoungBoundary:
        return self._boundary

    def __eq__(self, other):
        return isinstance(other, FrequencyTable) and self.counts == other.counts

    def __repr__(self):
        return f"FrequencyTable(M={self.M}, N={self.N}, distinct={len(self.counts)})"


def table_from_sample(values: Iterable[int]) -> FrequencyTable:
    """Aggregate raw draws into a frequency table."""
    arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values)
    if arr.size == 0:
        raise ValueError("values must be nonempty")
    if not np.issubdtype(arr.dtype, np.integer):
        if not np.all(arr == np.floor(arr)):
            raise ValueError("values must be integers")
        arr = arr.astype(np.int64)
    if arr.min() < 0:
        raise ValueError("values must be nonnegative")
    uniq, counts = np.unique(arr, return_counts=True)
    return FrequencyTable({int(j): int(m) for j, m in zip(uniq, counts)})


def young_y(table: FrequencyTable, x: float) -> int:
    """Boundary height Y(x) = #{sources with value >= x}."""
    return int(table.boundary().at(x))


def scaled_y(table: FrequencyTable, a: float, b: float, x: float) -> float:
    """Y-tilde(x) = Y(A x) / B."""
    if not (a > 0.0 and b > 0.0):
        raise ValueError("scales must be positive")
    return young_y(table, a * x) / b


def boundary_moments(params, m_sources: int, x: float,
                     x2: float | None = None) -> tuple[float, float, float]:
    """(mean, variance, covariance) of Y(x) (and Y(x2)) under the model.

    Y(x) is Binomial(M, F-bar(x)), and for x <= x2 the covariance of
    Y(x), Y(x2) is M F-bar(x2) (1 - F-bar(x)).
    """
    from .distribution import ccdf
    if m_sources < 1:
        raise ValueError("m_sources must be >= 1")
    if x2 is None:
        x2 = x
    if x2 < x:
        raise ValueError("x2 must be >= x")
    p1 = ccdf(params, x)
    p2 = ccdf(params, x2)
    mean = m_sources * p1
    var = m_sources * p1 * (1.0 - p1)
    cov = m_sources * p2 * (1.0 - p1)
    return mean, var, cov


def martingale_w(values, cdf: Callable[[float], float], t: float) -> float:
    """W(t) = #{X_i < 1/t} / F(1/t) - n with F(x) = P(X < x).

    The zero-mean martingale in t behind the fluctuation theory; t = 0
    returns 0 by convention.
    """
    if t < 0.0:
        raise ValueError("t must be >= 0")
    if t == 0.0:
        return 0.0
    arr = np.asarray(values)
    prob = cdf(1.0 / t)
    if not prob > 0.0:
        raise ValueError("F(1/t) must be positive")
    return float(np.count_nonzero(arr < 1.0 / t) / prob - arr.size)
