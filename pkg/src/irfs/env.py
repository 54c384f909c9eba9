"""Feature-selection environment shared by all agents.

One step takes a joint action vector, scores the selected subset with a
freshly fitted decision tree, splits the accuracy equally among the selecting
agents, encodes the new subset as a state vector, stores one transition per
agent and trains every agent that has enough memory.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from . import cart, qpolicy
from .errors import IndexOutOfRange, RangeError
from .stats import describe_columns

STATE_DIM = 49
N_STATS = 7


class AdviceSource(str, Enum):
    TRAINER1 = "trainer1"
    TRAINER2 = "trainer2"
    NONE = "none"

    def __str__(self):
        return self.value


@lru_cache(maxsize=16)
def standardized(train) -> np.ndarray:
    """Training columns shifted/scaled by their own mean and std; constant columns -> 0."""
    X = train.features
    mu = X.mean(axis=0)
    sd = X.std(axis=0)
    const = X.min(axis=0) == X.max(axis=0)
    Z = (X - mu) / np.where(const, 1.0, sd)
    Z[:, const] = 0.0
    Z.flags.writeable = False
    return Z


def _check_selected(train, selected):
    sel = np.unique(np.asarray(list(selected), dtype=np.int64))
    if sel.size and (sel[0] < 0 or sel[-1] >= train.N):
        raise IndexOutOfRange(f"selected indices must lie in [0, {train.N})")
    return sel


def encode_state(train, selected) -> np.ndarray:
    """49-dim description of the selected subset.

    Each selected (standardized) column is summarized by 7 statistics; each of
    those 7 statistic columns is then summarized across the selected features.
    Flattened in (per-column stat, across-feature stat) order.
    """
    sel = _check_selected(train, selected)
    if sel.size == 0:
        return np.zeros(STATE_DIM)
    per_column = describe_columns(standardized(train)[:, sel])  # (|S|, 7)
    return describe_columns(per_column).ravel()  # row r summarizes stat r


@lru_cache(maxsize=16)
def _graph_projection(seed: int) -> np.ndarray:
    return np.random.default_rng([seed, 0x6C]).normal(scale=1.0 / np.sqrt(N_STATS), size=(N_STATS, N_STATS))


def encode_state_graph(train, selected, seed: int = 0) -> np.ndarray:
    """Graph-flavoured encoder: one propagation step over the |Pearson| graph.

    Node features are the per-column statistics; the adjacency is the absolute
    correlation between selected columns (self-loops included), row
    normalized. After propagation and a fixed seeded 7x7 projection with ReLU
    the nodes are pooled the same way as :func:`encode_state`.
    """
    sel = _check_selected(train, selected)
    if sel.size == 0:
        return np.zeros(STATE_DIM)
    Z = standardized(train)[:, sel]
    H = describe_columns(Z)
    n = Z.shape[0]
    sd = Z.std(axis=0)
    live = sd > 0
    A = np.eye(sel.size)
    if live.sum() > 1:
        Zl = (Z[:, live] - Z[:, live].mean(axis=0)) / sd[live]
        A[np.ix_(live, live)] = np.clip(np.abs(Zl.T @ Zl / n), 0.0, 1.0)
        A[np.diag_indices_from(A)] = 1.0
    A /= A.sum(axis=1, keepdims=True)
    H = np.maximum(A @ H @ _graph_projection(seed), 0.0)
    return describe_columns(H).ravel()


def compute_reward(accuracy: float, actions) -> np.ndarray:
    """Accuracy split equally among the agents whose action is select."""
    a = np.asarray(actions, dtype=np.int64)
    r = np.zeros(a.size)
    k = int(a.sum())
    if k:
        r[a == 1] = accuracy / k
    return r


class BestAccTracker:
    """Per-step accuracy trace with running maxima."""

    def __init__(self):
        self.trace: list[float] = []
        self.running: list[float] = []

    def add(self, acc: float) -> float:
        best = max(acc, self.running[-1]) if self.running else acc
        self.trace.append(acc)
        self.running.append(best)
        return best

    def __len__(self):
        return len(self.trace)


def best_acc(tracker: BestAccTracker, start: int, l: int) -> float:
    """Max accuracy over steps ``start .. start + l`` inclusive."""
    if start < 0 or l < 0 or start + l >= len(tracker.trace):
        raise RangeError(f"window [{start}, {start + l}] outside trace of length {len(tracker.trace)}")
    return max(tracker.trace[start:start + l + 1])


@dataclass
class StepRecord:
    t: int
    prev_actions: np.ndarray
    initial_actions: np.ndarray
    advised_actions: np.ndarray
    actions: np.ndarray  # what was actually taken (== advised unless self-exploring)
    state_before: np.ndarray
    state_after: np.ndarray
    rewards: np.ndarray
    accuracy: float
    advice_source: AdviceSource
    flipped_agents: tuple = ()
    losses: np.ndarray = field(default=None, repr=False)

    @property
    def selected(self) -> tuple:
        return tuple(int(i) for i in np.flatnonzero(self.actions))


class Agent:
    """Policy network, replay memory and private RNG of one feature."""

    def __init__(self, index: int, state_dim: int, seed: int, learn: qpolicy.LearnConfig):
        self.index = index
        self.net = qpolicy.PolicyNetwork(state_dim, seed=[seed, index])
        self.buffer = qpolicy.ReplayBuffer(learn.replay_capacity)
        self.rng = np.random.default_rng([seed, index, 1])


class FeatureSelectionEnv:
    """Everything a run mutates: agents, previous actions, current state, trace.

    Step 0 starts as if every feature had been selected at step -1, so the
    trainers have a full participated set to work with.
    """

    def __init__(
        self,
        train,
        test,
        tree_cfg: cart.TreeConfig = cart.TreeConfig(),
        learn: qpolicy.LearnConfig = qpolicy.LearnConfig(),
        seed: int = 0,
        encoder: str = "meta",
    ):
        if encoder not in ("meta", "graph"):
            raise RangeError(f"unknown encoder {encoder!r}")
        self.train = train
        self.test = test
        self.tree_cfg = tree_cfg
        self.learn = learn
        self.seed = seed
        self.encoder = encoder
        self.N = train.N
        self.agents = [Agent(i, STATE_DIM, seed, learn) for i in range(self.N)]
        self.prev_actions = np.ones(self.N, dtype=np.int64)
        self.state = self.encode(range(self.N))
        self.tracker = BestAccTracker()
        self.records: list[StepRecord] = []
        self.best_subset: tuple = ()
        self.best_step = -1
        self._acc_cache: dict[bytes, float] = {}

    @property
    def nets(self):
        return [a.net for a in self.agents]

    def encode(self, selected) -> np.ndarray:
        if self.encoder == "graph":
            return encode_state_graph(self.train, selected, self.seed)
        return encode_state(self.train, selected)

    def accuracy(self, actions) -> float:
        key = np.asarray(actions, dtype=np.int8).tobytes()
        acc = self._acc_cache.get(key)
        if acc is None:
            sel = np.flatnonzero(actions)
            acc = cart.evaluate_accuracy(self.train, self.test, sel, self.tree_cfg) if sel.size else 0.0
            self._acc_cache[key] = acc
        return acc

    def greedy_actions(self) -> np.ndarray:
        """Pure argmax action of every agent in the current state."""
        return np.array([qpolicy.greedy(a.net, self.state) for a in self.agents], dtype=np.int64)

    def explore_actions(self) -> np.ndarray:
        return np.array(
            [qpolicy.act(a.net, self.state, self.learn, a.rng) for a in self.agents], dtype=np.int64
        )


def env_step(
    env: FeatureSelectionEnv,
    actions,
    *,
    initial_actions=None,
    advised_actions=None,
    advice_source: AdviceSource = AdviceSource.NONE,
    flipped_agents=(),
) -> StepRecord:
    """Apply ``actions``, score them, store transitions and train the agents."""
    actions = np.asarray(actions, dtype=np.int64).copy()
    if actions.shape != (env.N,) or not np.isin(actions, (0, 1)).all():
        raise RangeError(f"actions must be a 0/1 vector of length {env.N}")
    acc = env.accuracy(actions)
    state_before = env.state
    state_after = env.encode(np.flatnonzero(actions))
    rewards = compute_reward(acc, actions)

    losses = np.full(env.N, np.nan)
    bs = env.learn.batch_size
    for i, agent in enumerate(env.agents):
        qpolicy.push(agent.buffer, qpolicy.Transition(state_before, int(actions[i]), float(rewards[i]), state_after))
        if len(agent.buffer) >= bs:
            batch = qpolicy.sample(agent.buffer, bs, agent.rng)
            losses[i] = qpolicy.train_step(agent.net, batch, env.learn)

    t = len(env.records)
    rec = StepRecord(
        t=t,
        prev_actions=env.prev_actions.copy(),
        initial_actions=actions.copy() if initial_actions is None else np.asarray(initial_actions).copy(),
        advised_actions=actions.copy() if advised_actions is None else np.asarray(advised_actions).copy(),
        actions=actions,
        state_before=state_before,
        state_after=state_after,
        rewards=rewards,
        accuracy=acc,
        advice_source=AdviceSource(advice_source),
        flipped_agents=tuple(int(i) for i in flipped_agents),
        losses=losses,
    )
    env.records.append(rec)
    env.tracker.add(acc)
    if env.best_step < 0 or acc > env.tracker.trace[env.best_step]:
        env.best_step = t
        env.best_subset = rec.selected
    env.prev_actions = actions
    env.state = state_after
    return rec
