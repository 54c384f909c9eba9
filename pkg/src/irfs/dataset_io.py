"""Loading, validating and splitting tabular classification data.

Datasets are plain numeric matrices with one integer label column. CSV is the
only on-disk format: comma separated, UTF-8, optional single header row, no
quoting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .errors import LabelError, ParseError, SchemaError, SplitError

MIN_FEATURES = 2
MIN_SAMPLES = 10


@dataclass(frozen=True, eq=False)
class Dataset:
    """Numeric feature matrix plus dense integer class labels.

    ``features`` is stored column-major (Fortran order) because every consumer
    works column by column. ``num_classes`` is carried explicitly so that
    subsets produced by :func:`split` keep the class count of their parent even
    when a class is missing from a small half.
    """

    name: str
    features: np.ndarray
    labels: np.ndarray
    feature_names: tuple
    num_classes: int = field(default=-1)

    def __post_init__(self):
        X = np.asfortranarray(np.asarray(self.features, dtype=np.float64))
        y = np.asarray(self.labels, dtype=np.int64)
        if X.ndim != 2:
            raise SchemaError(f"feature matrix must be 2-D, got shape {X.shape}")
        if y.shape != (X.shape[0],):
            raise SchemaError(f"expected {X.shape[0]} labels, got shape {y.shape}")
        if len(self.feature_names) != X.shape[1]:
            raise SchemaError("feature_names length does not match feature count")
        if not np.all(np.isfinite(X)):
            raise SchemaError("feature matrix contains NaN or Inf")
        C = self.num_classes
        if C < 0:
            C = int(y.max()) + 1 if y.size else 0
        if y.size and (y.min() < 0 or y.max() >= C):
            raise LabelError(f"labels must lie in [0, {C})")
        X.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", y)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "num_classes", int(C))

    @property
    def N(self) -> int:
        return self.features.shape[1]

    @property
    def num_samples(self) -> int:
        return self.features.shape[0]

    def take(self, rows, name=None) -> "Dataset":
        """Row subset sharing this dataset's feature names and class count."""
        rows = np.asarray(rows, dtype=np.int64)
        return Dataset(
            name=name or self.name,
            features=self.features[rows],
            labels=self.labels[rows],
            feature_names=self.feature_names,
            num_classes=self.num_classes,
        )


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.9
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise SplitError(f"train_fraction must be in (0, 1), got {self.train_fraction}")
        if self.seed < 0:
            raise SplitError("seed must be non-negative")


def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def _resolve_label_column(label_column, header, width):
    if isinstance(label_column, str) and not label_column.lstrip("-").isdigit():
        if header is None:
            raise SchemaError(f"label column {label_column!r} given by name but file has no header")
        if label_column not in header:
            raise SchemaError(f"label column {label_column!r} not found in header")
        return header.index(label_column)
    idx = int(label_column)
    if not -width <= idx < width:
        raise SchemaError(f"label column index {idx} out of range for {width} columns")
    return idx % width


def load_csv(
    path: Union[str, Path],
    label_column: Union[str, int] = -1,
    has_header: bool | None = None,
    min_samples: int = MIN_SAMPLES,
    name: str | None = None,
) -> Dataset:
    """Read a CSV file into a validated :class:`Dataset`.

    When ``has_header`` is None the first row is treated as a header if any
    cell outside the label column fails to parse as a number. Label tokens are
    mapped to dense ids in order of first appearance.
    """
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        rows = [line.rstrip("\r\n").split(",") for line in fh]
    rows = [r for r in rows if r != [""]]
    if not rows:
        raise SchemaError(f"{path} is empty")
    width = len(rows[0])

    first = [c.strip() for c in rows[0]]
    by_name = isinstance(label_column, str) and not label_column.lstrip("-").isdigit()
    if has_header is None and by_name:
        has_header = True
    elif has_header is None:
        # the label column may hold textual class tokens, so it can't vote
        guess_label = _resolve_label_column(label_column, None, width)
        has_header = any(
            not _is_number(tok) for j, tok in enumerate(first) if j != guess_label
        )
    header = first if has_header else None
    body = rows[1:] if has_header else rows
    label_idx = _resolve_label_column(label_column, header, width)

    feature_cols = [j for j in range(width) if j != label_idx]
    if len(feature_cols) < MIN_FEATURES:
        raise SchemaError(f"need at least {MIN_FEATURES} feature columns, got {len(feature_cols)}")
    if len(body) < min_samples:
        raise SchemaError(f"need at least {min_samples} rows, got {len(body)}")

    X = np.empty((len(body), len(feature_cols)), dtype=np.float64)
    label_ids: dict[str, int] = {}
    y = np.empty(len(body), dtype=np.int64)
    offset = 2 if has_header else 1
    for i, row in enumerate(body):
        if len(row) != width:
            raise ParseError(i + offset, len(row), ",".join(row))
        for k, j in enumerate(feature_cols):
            tok = row[j].strip()
            try:
                v = float(tok)
            except ValueError:
                raise ParseError(i + offset, j, tok) from None
            if not math.isfinite(v):
                raise ParseError(i + offset, j, tok)
            X[i, k] = v
        tok = row[label_idx].strip()
        if tok == "":
            raise ParseError(i + offset, label_idx, tok)
        y[i] = label_ids.setdefault(tok, len(label_ids))

    if len(label_ids) < 2:
        raise LabelError("label column holds a single class")
    names = [header[j] for j in feature_cols] if header else [f"f{k}" for k in range(len(feature_cols))]
    return Dataset(
        name=name or path.stem,
        features=X,
        labels=y,
        feature_names=names,
        num_classes=len(label_ids),
    )


def write_csv(d: Dataset, path: Union[str, Path], label_name: str = "label") -> None:
    """Write ``d`` with a header row and the label as the last column.

    Floats are written with ``repr`` so that reloading is bit-exact.
    """
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(list(d.feature_names) + [label_name]) + "\n")
        for row, lab in zip(d.features, d.labels):
            fh.write(",".join(repr(float(v)) for v in row) + f",{int(lab)}\n")


def split_indices(num_samples: int, spec: SplitSpec) -> tuple[np.ndarray, np.ndarray]:
    """Seeded, unstratified train/test index partition (each half sorted)."""
    n_train = int(math.floor(spec.train_fraction * num_samples + 0.5))
    if n_train <= 0 or n_train >= num_samples:
        raise SplitError(
            f"fraction {spec.train_fraction} of {num_samples} samples leaves an empty half"
        )
    perm = np.random.default_rng(spec.seed).permutation(num_samples)
    return np.sort(perm[:n_train]), np.sort(perm[n_train:])


def split(d: Dataset, spec: SplitSpec) -> tuple[Dataset, Dataset]:
    train_idx, test_idx = split_indices(d.num_samples, spec)
    if np.unique(d.labels[train_idx]).size < 2:
        raise SplitError("train half contains fewer than two classes")
    return d.take(train_idx, f"{d.name}[train]"), d.take(test_idx, f"{d.name}[test]")


def from_arrays(X, y, name: str = "array", feature_names: Sequence[str] | None = None) -> Dataset:
    """Build a Dataset from in-memory arrays.

    Labels are remapped to dense ids in sorted order, so labels that are
    already ``0..C-1`` pass through unchanged.
    """
    X = np.asarray(X, dtype=np.float64)
    classes, ids = np.unique(np.asarray(y), return_inverse=True)
    if feature_names is None:
        feature_names = [f"f{k}" for k in range(X.shape[1])]
    return Dataset(name, X, ids.astype(np.int64), tuple(feature_names), len(classes))
