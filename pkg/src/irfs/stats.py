"""Descriptive statistics, Pearson correlation and plug-in mutual information.

All functions are pure. Mutual information is reported in nats and estimated
from empirical frequencies of discretized variables; continuous columns are
discretized with quantile edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import EmptyInput, IndexOutOfRange, LengthMismatch, RangeError


class ColumnStats(NamedTuple):
    mean: float
    std: float
    min: float
    q25: float
    median: float
    q75: float
    max: float

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=np.float64)


@dataclass(frozen=True)
class BinningSpec:
    num_bins: int = 10
    method: str = "quantile"

    def __post_init__(self):
        if self.num_bins < 2:
            raise RangeError(f"num_bins must be >= 2, got {self.num_bins}")
        if self.method != "quantile":
            raise RangeError(f"unsupported binning method {self.method!r}")


def describe(column) -> ColumnStats:
    """Mean, population std, min, quartiles and max of a finite vector.

    Quantiles interpolate linearly between order statistics.
    """
    x = np.asarray(column, dtype=np.float64).ravel()
    if x.size == 0:
        raise EmptyInput("describe() needs at least one value")
    lo, hi = x.min(), x.max()
    if lo == hi:
        v = float(lo)
        return ColumnStats(v, 0.0, v, v, v, v, v)
    q25, med, q75 = np.quantile(x, [0.25, 0.5, 0.75])
    mean = min(max(float(x.mean()), float(lo)), float(hi))
    return ColumnStats(mean, float(x.std()), float(lo), float(q25), float(med), float(q75), float(hi))


def describe_columns(M) -> np.ndarray:
    """Vectorized :func:`describe` over the columns of ``M``; returns shape (cols, 7)."""
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] == 0:
        raise EmptyInput("describe_columns() needs a non-empty 2-D matrix")
    lo = M.min(axis=0)
    hi = M.max(axis=0)
    qs = np.quantile(M, [0.25, 0.5, 0.75], axis=0)
    out = np.column_stack([
        np.clip(M.mean(axis=0), lo, hi), M.std(axis=0), lo, qs[0], qs[1], qs[2], hi,
    ])
    const = lo == hi
    if const.any():
        out[const] = lo[const, None]
        out[const, 1] = 0.0
    return out


def pearson(x, y) -> float:
    """Pearson correlation; 0 when either vector is constant."""
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.size != y.size:
        raise LengthMismatch(f"lengths differ: {x.size} vs {y.size}")
    if x.size < 2:
        raise EmptyInput("pearson() needs at least two samples")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        return 0.0
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def discretize(column, spec: BinningSpec = BinningSpec()) -> np.ndarray:
    """Quantile-edge binning to dense integer ids.

    Duplicate edges collapse, so heavily tied columns get fewer bins; a
    constant column maps entirely to bin 0. A value equal to an edge falls in
    the lower bin.
    """
    x = np.asarray(column, dtype=np.float64).ravel()
    if x.size == 0:
        raise EmptyInput("discretize() needs at least one value")
    inner = np.unique(np.quantile(x, np.linspace(0.0, 1.0, spec.num_bins + 1)[1:-1]))
    raw = np.searchsorted(inner, x, side="left")
    _, dense = np.unique(raw, return_inverse=True)
    return dense.astype(np.int64)


def _contingency(x, y):
    x = np.asarray(x).ravel()
    y = np.asarray(y).ravel()
    if x.size != y.size:
        raise LengthMismatch(f"lengths differ: {x.size} vs {y.size}")
    if x.size == 0:
        raise EmptyInput("mutual_info() needs at least one sample")
    _, xi = np.unique(x, return_inverse=True)
    _, yi = np.unique(y, return_inverse=True)
    ky = int(yi.max()) + 1
    counts = np.bincount(xi * ky + yi)
    nz = np.flatnonzero(counts)
    return counts[nz], xi, yi, nz // ky, nz % ky


def mutual_info(x, y) -> float:
    """Plug-in mutual information (nats) between two discrete vectors.

    Terms are accumulated with ``math.fsum`` so the result does not depend on
    summation order, which makes ``mutual_info(x, y) == mutual_info(y, x)``
    hold bit for bit.
    """
    c_ab, xi, yi, a, b = _contingency(x, y)
    n = xi.size
    ca = np.bincount(xi)[a]
    cb = np.bincount(yi)[b]
    terms = (c_ab / n) * np.log((c_ab * float(n)) / (ca.astype(np.float64) * cb))
    return max(0.0, math.fsum(terms.tolist()))


def entropy(x) -> float:
    """Empirical Shannon entropy (nats) of a discrete vector."""
    x = np.asarray(x).ravel()
    if x.size == 0:
        raise EmptyInput("entropy() needs at least one sample")
    _, counts = np.unique(x, return_counts=True)
    p = counts / x.size
    return max(0.0, -math.fsum((p * np.log(p)).tolist()))


@lru_cache(maxsize=64)
def _binned(d, num_bins: int) -> tuple:
    spec = BinningSpec(num_bins)
    return tuple(discretize(d.features[:, j], spec) for j in range(d.N))


@lru_cache(maxsize=64)
def _relevance_all(d, num_bins: int) -> tuple:
    return tuple(mutual_info(col, d.labels) for col in _binned(d, num_bins))


def binned_columns(d, bins: BinningSpec = BinningSpec()) -> tuple:
    """Discretized copy of every feature column (memoized per dataset)."""
    return _binned(d, bins.num_bins)


def mi_relevance(d, feature_indices, bins: BinningSpec = BinningSpec()) -> dict:
    """MI between each requested feature (discretized) and the labels."""
    scores = _relevance_all(d, bins.num_bins)
    out = {}
    for i in feature_indices:
        i = int(i)
        if not 0 <= i < d.N:
            raise IndexOutOfRange(f"feature index {i} outside [0, {d.N})")
        out[i] = scores[i]
    return out


def rank_by_score(scores: dict) -> list:
    """Indices sorted by descending score, ties broken by lower index."""
    return sorted(scores, key=lambda i: (-scores[i], i))
