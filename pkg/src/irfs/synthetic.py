"""Seeded synthetic classification data for tests and demos."""

from __future__ import annotations

import numpy as np

from .dataset_io import Dataset


def majority_of_thresholds(
    n_samples: int = 500,
    n_informative: int = 5,
    n_noise: int = 15,
    seed: int = 0,
    shuffle_columns: bool = True,
) -> tuple[Dataset, tuple]:
    """Binary label = majority vote of ``x_j > 0`` over the informative columns.

    All columns are iid standard normal. Returns the dataset and the sorted
    indices of the informative columns.
    """
    if n_informative < 1 or n_informative % 2 == 0:
        raise ValueError("n_informative must be a positive odd number")
    rng = np.random.default_rng(seed)
    N = n_informative + n_noise
    X = rng.standard_normal((n_samples, N))
    y = ((X[:, :n_informative] > 0).sum(axis=1) * 2 > n_informative).astype(np.int64)
    order = rng.permutation(N) if shuffle_columns else np.arange(N)
    X = X[:, order]
    informative = tuple(sorted(int(np.flatnonzero(order == j)[0]) for j in range(n_informative)))
    names = [f"x{j}" for j in range(N)]
    return Dataset(f"majority{n_informative}+{n_noise}", X, y, names, 2), informative


def separable(n_samples: int = 60, n_features: int = 3, seed: int = 0) -> Dataset:
    """Label = ``x_0 > 0``; other columns are noise. Trivially 100% learnable."""
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n_samples, n_features))
    X[:, 0] += np.where(X[:, 0] > 0, 0.5, -0.5)
    y = (X[:, 0] > 0).astype(np.int64)
    return Dataset("separable", X, y, [f"x{j}" for j in range(n_features)], 2)
