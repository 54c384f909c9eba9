"""One-shot feature selectors used as comparison points.

``kbest_select`` ranks by mutual information with the label, ``dtrfe_select``
repeatedly drops the least important feature of a refitted tree, and
``mrmr_select`` greedily trades relevance against mean redundancy (MID form).
``run_marlfs`` is the multi-agent explorer with every trainer switched off.
"""

from __future__ import annotations

import numpy as np

from . import cart
from .errors import RangeError
from .stats import BinningSpec, binned_columns, mi_relevance, mutual_info, rank_by_score
from .trainers import NO_TRAINER, run_irfs


def default_k(N: int) -> int:
    return max(1, N // 2)


def _check_k(k, N):
    if not 1 <= k <= N:
        raise RangeError(f"k must be in [1, {N}], got {k}")


def kbest_select(train, k: int | None = None, bins: BinningSpec = BinningSpec()) -> tuple:
    k = default_k(train.N) if k is None else k
    _check_k(k, train.N)
    return tuple(sorted(rank_by_score(mi_relevance(train, range(train.N), bins))[:k]))


def dtrfe_select(train, k: int | None = None, cfg: cart.TreeConfig = cart.TreeConfig(), history=None) -> tuple:
    """Recursive elimination, one feature per refit.

    The dropped feature is the least important one; among equal importances the
    higher index goes first. ``history``, if given, receives each dropped index.
    """
    k = default_k(train.N) if k is None else k
    _check_k(k, train.N)
    remaining = list(range(train.N))
    while len(remaining) > k:
        imp = cart.fit(train, remaining, cfg).importances
        drop = min(remaining, key=lambda i: (imp[i], -i))
        remaining.remove(drop)
        if history is not None:
            history.append(drop)
    return tuple(remaining)


def mrmr_order(train, k: int | None = None, bins: BinningSpec = BinningSpec()) -> list:
    """Selection order of greedy MID-form mRMR."""
    k = default_k(train.N) if k is None else k
    _check_k(k, train.N)
    relevance = mi_relevance(train, range(train.N), bins)
    cols = binned_columns(train, bins)
    redundancy: dict = {}
    first = rank_by_score(relevance)[0]
    chosen = [first]
    candidates = [i for i in range(train.N) if i != first]
    while len(chosen) < k:
        newest = chosen[-1]
        for f in candidates:
            redundancy[f] = redundancy.get(f, 0.0) + mutual_info(cols[f], cols[newest])
        scores = {f: relevance[f] - redundancy[f] / len(chosen) for f in candidates}
        pick = rank_by_score(scores)[0]
        chosen.append(pick)
        candidates.remove(pick)
    return chosen


def mrmr_select(train, k: int | None = None, bins: BinningSpec = BinningSpec()) -> tuple:
    return tuple(sorted(mrmr_order(train, k, bins)))


SELECTORS = {
    "kbest": kbest_select,
    "dtrfe": dtrfe_select,
    "mrmr": mrmr_select,
}


def run_marlfs(env, L: int, on_step=None):
    """Untutored multi-agent exploration: every step is epsilon-greedy, nothing is flipped."""
    return run_irfs(env, L, NO_TRAINER, on_step=on_step)


def one_shot_accuracy(train, test, method: str, k: int | None = None, bins=BinningSpec(), cfg=cart.TreeConfig()):
    """Selected subset and its downstream test accuracy for one baseline."""
    if method == "dtrfe":
        subset = dtrfe_select(train, k, cfg)
    else:
        subset = SELECTORS[method](train, k, bins)
    return subset, cart.evaluate_accuracy(train, test, subset, cfg)
