"""Per-agent deep Q-learning: a 2-layer MLP, replay memory, epsilon-greedy.

Every agent owns one :class:`PolicyNetwork` (two actions: 0 = deselect,
1 = select) and one :class:`ReplayBuffer`. Updates are one-step Q-learning with
no target network and no terminal states, optimized with Adam.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import (
    ConfigError,
    DimensionMismatch,
    EmptyInput,
    InsufficientSamples,
    NonFiniteLoss,
)

HIDDEN = 128
N_ACTIONS = 2
PARAMS = ("W1", "b1", "W2", "b2")
CHECKPOINT_FORMAT = "irfs-agents"
CHECKPOINT_VERSION = 1


@dataclass(frozen=True)
class LearnConfig:
    gamma: float = 0.9
    epsilon_greedy: float = 0.9  # probability of taking the greedy action
    batch_size: int = 16
    learning_rate: float = 0.01
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    replay_capacity: int = 2000

    def __post_init__(self):
        if not 0.0 <= self.gamma < 1.0:
            raise ConfigError(f"gamma must be in [0, 1), got {self.gamma}")
        if not 0.0 <= self.epsilon_greedy <= 1.0:
            raise ConfigError(f"epsilon must be in [0, 1], got {self.epsilon_greedy}")
        if self.batch_size < 1:
            raise ConfigError("batch_size must be >= 1")
        if self.learning_rate <= 0:
            raise ConfigError("learning_rate must be positive")
        if self.replay_capacity < self.batch_size:
            raise ConfigError("replay_capacity must be >= batch_size")


class PolicyNetwork:
    """Q-network ``q = W2.T @ relu(W1.T @ s + b1) + b2`` with Adam moments."""

    def __init__(self, state_dim: int, seed=0, hidden: int = HIDDEN):
        self.state_dim = int(state_dim)
        self.hidden = int(hidden)
        self.rng_seed = seed
        rng = np.random.default_rng(seed)
        k1 = 1.0 / np.sqrt(self.state_dim)
        k2 = 1.0 / np.sqrt(self.hidden)
        self.W1 = rng.uniform(-k1, k1, size=(self.state_dim, self.hidden))
        self.b1 = rng.uniform(-k1, k1, size=self.hidden)
        self.W2 = rng.uniform(-k2, k2, size=(self.hidden, N_ACTIONS))
        self.b2 = rng.uniform(-k2, k2, size=N_ACTIONS)
        self.reset_optimizer()

    def reset_optimizer(self):
        self.m = {p: np.zeros_like(getattr(self, p)) for p in PARAMS}
        self.v = {p: np.zeros_like(getattr(self, p)) for p in PARAMS}
        self.step_count = 0

    def params(self) -> dict:
        return {p: getattr(self, p) for p in PARAMS}

    def set_params(self, **arrays):
        for name, value in arrays.items():
            if name not in PARAMS:
                raise KeyError(name)
            value = np.array(value, dtype=np.float64)
            if value.shape != getattr(self, name).shape:
                raise DimensionMismatch(f"{name}: expected {getattr(self, name).shape}, got {value.shape}")
            setattr(self, name, value)


class Transition(NamedTuple):
    s: np.ndarray
    a: int
    r: float
    s_next: np.ndarray


class ReplayBuffer:
    """Fixed-capacity FIFO memory of transitions."""

    def __init__(self, capacity: int = 2000):
        if capacity < 1:
            raise ConfigError("capacity must be positive")
        self.capacity = capacity
        self._items: deque = deque(maxlen=capacity)
        self.inserted = 0

    def __len__(self):
        return len(self._items)

    def __iter__(self):
        return iter(self._items)


def push(buf: ReplayBuffer, t: Transition) -> None:
    buf._items.append(t)
    buf.inserted += 1


def sample(buf: ReplayBuffer, batch_size: int, rng: np.random.Generator) -> list:
    """Uniform draw without replacement."""
    if len(buf) < batch_size:
        raise InsufficientSamples(f"buffer holds {len(buf)} transitions, need {batch_size}")
    picks = rng.choice(len(buf), size=batch_size, replace=False)
    return [buf._items[i] for i in picks]


def forward_batch(net: PolicyNetwork, S) -> np.ndarray:
    """Q-values for a batch of states, shape (B, 2)."""
    S = np.asarray(S, dtype=np.float64)
    if S.ndim != 2 or S.shape[1] != net.state_dim:
        raise DimensionMismatch(f"expected states of dimension {net.state_dim}, got shape {S.shape}")
    return np.maximum(S @ net.W1 + net.b1, 0.0) @ net.W2 + net.b2


def forward(net: PolicyNetwork, s) -> tuple[float, float]:
    s = np.asarray(s, dtype=np.float64)
    if s.shape != (net.state_dim,):
        raise DimensionMismatch(f"expected state of dimension {net.state_dim}, got shape {s.shape}")
    q = forward_batch(net, s[None, :])[0]
    return float(q[0]), float(q[1])


def greedy(net: PolicyNetwork, s) -> int:
    """Highest-valued action; a tie selects."""
    q0, q1 = forward(net, s)
    return 1 if q1 >= q0 else 0


def act(net: PolicyNetwork, s, cfg: LearnConfig, rng: np.random.Generator) -> int:
    """Greedy action with probability epsilon, otherwise a fair coin."""
    if rng.random() < cfg.epsilon_greedy:
        return greedy(net, s)
    return int(rng.integers(N_ACTIONS))


def _stack(batch):
    S = np.array([t.s for t in batch], dtype=np.float64)
    A = np.array([t.a for t in batch], dtype=np.int64)
    R = np.array([t.r for t in batch], dtype=np.float64)
    S2 = np.array([t.s_next for t in batch], dtype=np.float64)
    return S, A, R, S2


def td_targets(net: PolicyNetwork, batch, cfg: LearnConfig) -> np.ndarray:
    _, _, R, S2 = _stack(batch)
    return R + cfg.gamma * forward_batch(net, S2).max(axis=1)


def loss_and_grads(net: PolicyNetwork, batch, cfg: LearnConfig, targets=None):
    """Mean squared TD error and its gradient with the targets held fixed."""
    if not batch:
        raise EmptyInput("train_step needs a non-empty batch")
    S, A, _, _ = _stack(batch)
    y = td_targets(net, batch, cfg) if targets is None else np.asarray(targets, dtype=np.float64)
    B = len(batch)
    pre = S @ net.W1 + net.b1
    h = np.maximum(pre, 0.0)
    q = h @ net.W2 + net.b2
    rows = np.arange(B)
    err = q[rows, A] - y
    loss = float(np.mean(err ** 2))
    dq = np.zeros_like(q)
    dq[rows, A] = 2.0 * err / B
    dh = (dq @ net.W2.T) * (pre > 0)
    grads = {
        "W1": S.T @ dh,
        "b1": dh.sum(axis=0),
        "W2": h.T @ dq,
        "b2": dq.sum(axis=0),
    }
    return loss, grads


def train_step(net: PolicyNetwork, batch, cfg: LearnConfig) -> float:
    """One Adam step on the batch's TD loss; returns the pre-update loss."""
    loss, grads = loss_and_grads(net, batch, cfg)
    if not np.isfinite(loss):
        raise NonFiniteLoss(f"loss is {loss} at optimizer step {net.step_count}")
    net.step_count += 1
    b1, b2 = cfg.adam_beta1, cfg.adam_beta2
    c1 = 1.0 - b1 ** net.step_count
    c2 = 1.0 - b2 ** net.step_count
    for p in PARAMS:
        g = grads[p]
        m = net.m[p] = b1 * net.m[p] + (1.0 - b1) * g
        v = net.v[p] = b2 * net.v[p] + (1.0 - b2) * g * g
        step = cfg.learning_rate * (m / c1) / (np.sqrt(v / c2) + cfg.adam_eps)
        new = getattr(net, p) - step
        if not np.all(np.isfinite(new)):
            raise NonFiniteLoss(f"parameter {p} became non-finite at optimizer step {net.step_count}")
        setattr(net, p, new)
    return loss


def batch_loss(net: PolicyNetwork, batch, targets) -> float:
    S, A, _, _ = _stack(batch)
    q = forward_batch(net, S)
    return float(np.mean((q[np.arange(len(batch)), A] - targets) ** 2))


def save_agents(path, nets) -> None:
    """Write every agent's parameters and optimizer state to one JSON file."""
    payload = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "agents": {
            str(i): {
                "state_dim": net.state_dim,
                "hidden": net.hidden,
                "step_count": net.step_count,
                "params": {p: getattr(net, p).tolist() for p in PARAMS},
                "adam_m": {p: net.m[p].tolist() for p in PARAMS},
                "adam_v": {p: net.v[p].tolist() for p in PARAMS},
            }
            for i, net in enumerate(nets)
        },
    }
    Path(path).write_text(json.dumps(payload))


def load_agents(path, nets) -> None:
    """Restore parameters saved by :func:`save_agents` into ``nets`` in place."""
    payload = json.loads(Path(path).read_text())
    if payload.get("format") != CHECKPOINT_FORMAT or payload.get("version") != CHECKPOINT_VERSION:
        raise ConfigError(f"{path} is not an irfs agent checkpoint (version {CHECKPOINT_VERSION})")
    agents = payload["agents"]
    if len(agents) != len(nets):
        raise ConfigError(f"checkpoint holds {len(agents)} agents, run has {len(nets)}")
    for i, net in enumerate(nets):
        rec = agents[str(i)]
        if rec["state_dim"] != net.state_dim or rec["hidden"] != net.hidden:
            raise DimensionMismatch(f"agent {i}: checkpoint shape does not match network")
        net.set_params(**rec["params"])
        net.m = {p: np.array(rec["adam_m"][p]) for p in PARAMS}
        net.v = {p: np.array(rec["adam_v"][p]) for p in PARAMS}
        net.step_count = rec["step_count"]
