"""CART classification tree with Gini impurity.

Used three ways: as the downstream evaluator that scores a feature subset, as
the importance source of the decision-tree trainer, and as the engine of the
RFE baseline.

Split search is exhaustive over midpoints between consecutive distinct values.
Ties are broken by feature index, then by threshold, so a fit is a pure
function of its inputs. Gini gains are compared through the integer
quantity ``S_l/n_l + S_r/n_r`` (``S`` = sum of squared class counts), formed as
one division of exact integers, so mathematically equal gains compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyFeatureSet, IndexOutOfRange, RangeError, ShapeMismatch

LEAF = -1


@dataclass(frozen=True)
class TreeConfig:
    max_depth: int | None = None
    min_samples_split: int = 2
    min_samples_leaf: int = 1

    def __post_init__(self):
        if self.max_depth is not None and self.max_depth < 1:
            raise RangeError("max_depth must be positive or None")
        if self.min_samples_split < 2:
            raise RangeError("min_samples_split must be >= 2")
        if self.min_samples_leaf < 1:
            raise RangeError("min_samples_leaf must be >= 1")
        if self.min_samples_leaf > self.min_samples_split:
            raise RangeError("min_samples_leaf must not exceed min_samples_split")


@dataclass(frozen=True, eq=False)
class TreeModel:
    """Array-backed fitted tree.

    Node ``k`` is a leaf when ``feature[k] == -1``. ``feature`` holds global
    dataset column indices. ``importances`` has one entry per dataset column.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    class_counts: np.ndarray
    depth: np.ndarray
    importances: np.ndarray
    trained_feature_indices: tuple
    num_features: int

    @property
    def node_count(self) -> int:
        return self.feature.size

    @property
    def n_splits(self) -> int:
        return int(np.count_nonzero(self.feature != LEAF))

    @property
    def max_depth(self) -> int:
        return int(self.depth.max())


def _best_split(Xn, yn, num_classes, min_leaf):
    """Best Gini split of one node.

    Returns (local feature, threshold, score, left mask) or None when no
    candidate threshold exists. Zero-gain splits are accepted: Gini gain is
    never negative, and a strict rule would leave XOR-like nodes unsplit.
    """
    n, f = Xn.shape
    order = np.argsort(Xn, axis=0, kind="stable")
    xs = np.take_along_axis(Xn, order, axis=0)
    onehot = np.eye(num_classes, dtype=np.int64)[yn[order]]  # (n, f, C)
    left = np.cumsum(onehot, axis=0)[:-1]  # split after row k -> left has k+1 rows
    total = left[-1] + onehot[-1]
    right = total - left
    nl = np.arange(1, n, dtype=np.int64)[:, None]
    nr = n - nl
    S_l = np.einsum("kfc,kfc->kf", left, left)
    S_r = np.einsum("kfc,kfc->kf", right, right)
    num = S_l * nr + S_r * nl
    den = nl * nr
    valid = (xs[1:] > xs[:-1]) & (nl >= min_leaf) & (nr >= min_leaf)
    S_p = int(np.dot(total[0], total[0]))
    # non-negative gain  <=>  num / den >= S_p / n, checked on exact integers
    valid &= num * n >= S_p * den
    if not valid.any():
        return None
    score = np.where(valid, num / den, -np.inf)
    best = score.max()
    hits = score == best
    j = int(np.argmax(hits.any(axis=0)))
    k = int(np.argmax(hits[:, j]))
    lo, hi = xs[k, j], xs[k + 1, j]
    thr = (lo + hi) / 2.0
    if not lo <= thr < hi:
        thr = lo
    return j, float(thr), float(best), Xn[:, j] <= thr


def fit(train, feature_indices, cfg: TreeConfig = TreeConfig()) -> TreeModel:
    """Grow a tree on ``train`` restricted to ``feature_indices``."""
    feats = sorted({int(i) for i in feature_indices})
    if not feats:
        raise EmptyFeatureSet("cannot fit a tree on an empty feature set")
    if feats[0] < 0 or feats[-1] >= train.N:
        raise IndexOutOfRange(f"feature indices must lie in [0, {train.N})")
    if train.num_samples < 1:
        raise RangeError("cannot fit a tree on zero samples")

    X = np.ascontiguousarray(train.features[:, feats])
    y = train.labels
    C = max(train.num_classes, int(y.max()) + 1)
    n_total = y.size
    raw_imp = np.zeros(len(feats))

    feature, threshold, left, right, counts, depths = [], [], [], [], [], []

    def new_node(idx, depth):
        feature.append(LEAF)
        threshold.append(0.0)
        left.append(LEAF)
        right.append(LEAF)
        counts.append(np.bincount(y[idx], minlength=C))
        depths.append(depth)
        return len(feature) - 1

    stack = [(new_node(np.arange(n_total), 0), np.arange(n_total), 0)]
    while stack:
        node, idx, depth = stack.pop()
        c = counts[node]
        n = idx.size
        if (
            n < cfg.min_samples_split
            or np.count_nonzero(c) <= 1
            or (cfg.max_depth is not None and depth >= cfg.max_depth)
        ):
            continue
        found = _best_split(X[idx], y[idx], C, cfg.min_samples_leaf)
        if found is None:
            continue
        j, thr, score, go_left = found
        S_p = float(np.dot(c, c))
        raw_imp[j] += (score - S_p / n) / n_total
        li, ri = idx[go_left], idx[~go_left]
        feature[node] = feats[j]
        threshold[node] = thr
        left[node] = new_node(li, depth + 1)
        right[node] = new_node(ri, depth + 1)
        stack.append((right[node], ri, depth + 1))
        stack.append((left[node], li, depth + 1))

    importances = np.zeros(train.N)
    s = raw_imp.sum()
    if s > 0:
        importances[feats] = raw_imp / s
    return TreeModel(
        feature=np.array(feature, dtype=np.int64),
        threshold=np.array(threshold, dtype=np.float64),
        left=np.array(left, dtype=np.int64),
        right=np.array(right, dtype=np.int64),
        class_counts=np.array(counts, dtype=np.int64),
        depth=np.array(depths, dtype=np.int64),
        importances=importances,
        trained_feature_indices=tuple(feats),
        num_features=train.N,
    )


def apply(model: TreeModel, rows) -> np.ndarray:
    """Leaf index reached by each row (``value <= threshold`` goes left)."""
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[1] <= max(model.trained_feature_indices):
        raise ShapeMismatch(
            f"rows must be 2-D with at least {max(model.trained_feature_indices) + 1} columns"
        )
    node = np.zeros(rows.shape[0], dtype=np.int64)
    active = np.flatnonzero(model.feature[node] != LEAF)
    while active.size:
        nd = node[active]
        go_left = rows[active, model.feature[nd]] <= model.threshold[nd]
        node[active] = np.where(go_left, model.left[nd], model.right[nd])
        active = active[model.feature[node[active]] != LEAF]
    return node


def predict(model: TreeModel, rows) -> np.ndarray:
    """Majority class of the reached leaf; ties go to the smaller class id."""
    return np.argmax(model.class_counts[apply(model, rows)], axis=1)


def evaluate_accuracy(train, test, feature_indices, cfg: TreeConfig = TreeConfig()) -> float:
    """Fit on ``train`` restricted to ``feature_indices``, return test accuracy."""
    model = fit(train, feature_indices, cfg)
    return float(np.mean(predict(model, test.features) == test.labels))


def dump(model: TreeModel) -> str:
    """One line per node in preorder: depth, feature, threshold, class counts."""
    lines = []
    stack = [0]
    while stack:
        k = stack.pop()
        counts = " ".join(str(int(c)) for c in model.class_counts[k])
        if model.feature[k] == LEAF:
            lines.append(f"{model.depth[k]} leaf - [{counts}]")
        else:
            lines.append(f"{model.depth[k]} {model.feature[k]} {float(model.threshold[k])!r} [{counts}]")
            stack.extend((model.right[k], model.left[k]))
    return "\n".join(lines)
