"""External trainers that advise hesitant agents, and the teaching curriculum.

At every step the features selected on the previous step are *participated*.
Among them, those whose agent's greedy action is still "select" are
*assertive*; those whose agent now wants to deselect are *hesitant*. A trainer
may flip hesitant agents back to select; it never touches anyone else.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import cart
from .env import AdviceSource, FeatureSelectionEnv, StepRecord, env_step
from .errors import ConfigError, IndexOutOfRange, LengthMismatch
from .stats import BinningSpec, mi_relevance, rank_by_score

TRAINER_KINDS = ("kbest", "dtree")


class RoleSplit(NamedTuple):
    participated: tuple
    assertive: tuple
    hesitant: tuple


class Advice(NamedTuple):
    flip_set: tuple = ()


def classify_roles(prev_actions, initial_actions) -> RoleSplit:
    prev = np.asarray(prev_actions, dtype=np.int64)
    init = np.asarray(initial_actions, dtype=np.int64)
    if prev.shape != init.shape:
        raise LengthMismatch(f"action vectors differ in length: {prev.size} vs {init.size}")
    part = prev == 1
    return RoleSplit(
        tuple(np.flatnonzero(part).tolist()),
        tuple(np.flatnonzero(part & (init == 1)).tolist()),
        tuple(np.flatnonzero(part & (init == 0)).tolist()),
    )


def kbest_k(m: int, n: int) -> int:
    return math.floor(m / 2 + n)


def advise_kbest(train, roles: RoleSplit, bins: BinningSpec = BinningSpec()) -> Advice:
    """Flip the hesitant features that land in the top-k of the participated set by MI."""
    k = kbest_k(len(roles.assertive), len(roles.hesitant))
    if not roles.participated or k == 0 or not roles.hesitant:
        return Advice()
    ranked = rank_by_score(mi_relevance(train, roles.participated, bins))
    top = set(ranked[:k])
    return Advice(tuple(i for i in roles.hesitant if i in top))


def advise_dtree(train, roles: RoleSplit, cfg: cart.TreeConfig = cart.TreeConfig()) -> Advice:
    """Flip hesitant features whose tree importance beats the assertive median.

    With no assertive features the threshold is 0, so any hesitant feature the
    tree actually split on is flipped.
    """
    if not roles.participated or not roles.hesitant:
        return Advice()
    return flips_from_importances(cart.fit(train, roles.participated, cfg).importances, roles)


def flips_from_importances(imp, roles: RoleSplit) -> Advice:
    """Hesitant features strictly above the median assertive importance (0 if none)."""
    imp = np.asarray(imp, dtype=np.float64)
    g = float(np.median(imp[list(roles.assertive)])) if roles.assertive else 0.0
    return Advice(tuple(i for i in roles.hesitant if imp[i] > g))


def apply_advice(initial_actions, advice: Advice) -> np.ndarray:
    advised = np.asarray(initial_actions, dtype=np.int64).copy()
    flips = np.asarray(advice.flip_set, dtype=np.int64)
    if flips.size and (flips.min() < 0 or flips.max() >= advised.size):
        raise IndexOutOfRange(f"flip indices must lie in [0, {advised.size})")
    advised[flips] = 1 - advised[flips]
    return advised


@dataclass(frozen=True)
class TeachingSchedule:
    T: int
    L: int

    def __post_init__(self):
        if self.T <= 0:
            raise ConfigError(f"transfer point T must be positive, got {self.T}")
        if self.L < 1:
            raise ConfigError("L must be >= 1")
        if 2 * self.T > self.L:
            warnings.warn(f"2T = {2 * self.T} exceeds L = {self.L}; the self-exploration phase is skipped")


def _phase(T: int, t: int) -> AdviceSource:
    if t < T:
        return AdviceSource.TRAINER1
    if t < 2 * T:
        return AdviceSource.TRAINER2
    return AdviceSource.NONE


def advice_source(schedule: TeachingSchedule, t: int) -> AdviceSource:
    """[0, T) -> trainer1, [T, 2T) -> trainer2, [2T, inf) -> none."""
    return _phase(schedule.T, t)


@dataclass(frozen=True)
class Curriculum:
    """Which trainer (if any) advises at each step of a run.

    ``trainers`` lists the trainer kinds in teaching order. Two kinds give
    hybrid teaching; one kind advises for the first 2T steps; none gives the
    untutored multi-agent baseline.
    """

    trainers: tuple = ("kbest", "dtree")
    T: int = 1
    bins: BinningSpec = BinningSpec()
    tree_cfg: cart.TreeConfig = cart.TreeConfig()

    def __post_init__(self):
        if len(self.trainers) > 2 or any(k not in TRAINER_KINDS for k in self.trainers):
            raise ConfigError(f"trainers must be up to two of {TRAINER_KINDS}, got {self.trainers}")
        if self.trainers and self.T <= 0:
            raise ConfigError("transfer point T must be positive")

    def source(self, t: int) -> AdviceSource:
        if not self.trainers:
            return AdviceSource.NONE
        if len(self.trainers) == 1:
            return AdviceSource.TRAINER1 if t < 2 * self.T else AdviceSource.NONE
        return _phase(self.T, t)

    def advise(self, src: AdviceSource, train, roles: RoleSplit) -> Advice:
        if src is AdviceSource.NONE:
            return Advice()
        kind = self.trainers[0 if src is AdviceSource.TRAINER1 else 1]
        if kind == "kbest":
            return advise_kbest(train, roles, self.bins)
        return advise_dtree(train, roles, self.tree_cfg)


NO_TRAINER = Curriculum(trainers=())


def irfs_step(env: FeatureSelectionEnv, t: int, curriculum: Curriculum) -> StepRecord:
    """One interactive step: greedy decisions, roles, advice, then the environment."""
    initial = env.greedy_actions()
    roles = classify_roles(env.prev_actions, initial)
    src = curriculum.source(t)
    advice = curriculum.advise(src, env.train, roles)
    advised = apply_advice(initial, advice)
    actions = env.explore_actions() if src is AdviceSource.NONE else advised
    return env_step(
        env,
        actions,
        initial_actions=initial,
        advised_actions=advised,
        advice_source=src,
        flipped_agents=advice.flip_set,
    )


def run_irfs(env: FeatureSelectionEnv, L: int, curriculum: Curriculum, on_step=None):
    """Run ``L`` steps and return the environment's Best-Acc tracker."""
    for t in range(L):
        rec = irfs_step(env, t, curriculum)
        if on_step is not None:
            on_step(rec)
    return env.tracker
