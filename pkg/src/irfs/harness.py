"""Experiment runner: one run per (config, seed), plus multi-seed comparisons.

A run writes a JSON report and a per-step trace CSV. Trace columns are
``step,accuracy,best_acc,n_selected,advice_source,n_flips``; the trace of a
run is a pure function of (config, seed).
"""

from __future__ import annotations

import csv
import io
import json
import logging
import time
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import baselines, cart, qpolicy
from .dataset_io import Dataset, SplitSpec, load_csv, split
from .env import FeatureSelectionEnv
from .errors import ConfigError, RangeError
from .stats import BinningSpec
from .trainers import Curriculum, run_irfs

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
TRACE_COLUMNS = ("step", "accuracy", "best_acc", "n_selected", "advice_source", "n_flips")
IRFS_MODES = ("irfs-hybrid", "irfs-kbest", "irfs-dtt", "marlfs")
ONE_SHOT_MODES = ("kbest", "dtrfe", "mrmr")
MODES = IRFS_MODES + ONE_SHOT_MODES


@dataclass(frozen=True)
class RunConfig:
    data: str | None = None
    label_col: str | int = -1
    has_header: bool | None = None
    mode: str = "irfs-hybrid"
    steps: int = 1500
    transfer: int | None = None  # None -> steps // 3
    seed: int = 0
    split_seed: int | None = None  # None -> seed
    split: float = 0.9
    bins: int = 10
    epsilon: float = 0.9
    gamma: float = 0.9
    lr: float = 0.01
    batch: int = 16
    k: int | None = None  # one-shot baselines; None -> N // 2
    trainer_order: tuple = ("kbest", "dtree")
    encoder: str = "meta"
    out: str | None = None
    save: str | None = None
    load: str | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}; choose from {', '.join(MODES)}")
        if self.steps < 1:
            raise ConfigError("steps must be >= 1")
        if self.transfer is not None and self.transfer < 1:
            raise ConfigError("transfer point must be >= 1")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        order = tuple(self.trainer_order)
        if sorted(order) != ["dtree", "kbest"]:
            raise ConfigError(f"trainer_order must be a permutation of kbest,dtree, got {order}")
        object.__setattr__(self, "trainer_order", order)
        if self.bins < 2:
            raise ConfigError("bins must be >= 2")

    @property
    def T(self) -> int:
        return self.transfer if self.transfer is not None else max(1, self.steps // 3)

    def learn_config(self) -> qpolicy.LearnConfig:
        return qpolicy.LearnConfig(
            gamma=self.gamma, epsilon_greedy=self.epsilon, batch_size=self.batch, learning_rate=self.lr
        )

    def curriculum(self) -> Curriculum:
        trainers = {
            "irfs-hybrid": self.trainer_order,
            "irfs-kbest": ("kbest",),
            "irfs-dtt": ("dtree",),
            "marlfs": (),
        }[self.mode]
        return Curriculum(trainers=trainers, T=self.T, bins=BinningSpec(self.bins))


@dataclass
class RunReport:
    config: dict
    seed: int
    dataset: dict
    steps: list = field(default_factory=list)
    best_acc: list = field(default_factory=list)
    best_subset: dict = field(default_factory=dict)
    wall_clock_seconds: float = 0.0
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        d = asdict(self)
        return {"schema_version": d.pop("schema_version"), **d}

    def trace_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        for row in self.steps:
            w.writerow([row["step"], repr(row["accuracy"]), repr(row["best_acc"]),
                        row["n_selected"], row["advice_source"], row["n_flips"]])
        return buf.getvalue()

    def best_at(self, checkpoint: int) -> float:
        """Best accuracy over the first ``checkpoint`` steps (one-shot runs have a single value)."""
        if len(self.best_acc) == 1:
            return self.best_acc[0]
        if not 1 <= checkpoint <= len(self.best_acc):
            raise RangeError(f"checkpoint {checkpoint} outside [1, {len(self.best_acc)}]")
        return self.best_acc[checkpoint - 1]


def load_dataset(config: RunConfig) -> Dataset:
    if config.data is None:
        raise ConfigError("no dataset given")
    return load_csv(config.data, config.label_col, has_header=config.has_header)


def _run_one_shot(config, train, test, report):
    subset, acc = baselines.one_shot_accuracy(
        train, test, config.mode, config.k, BinningSpec(config.bins), cart.TreeConfig()
    )
    report.steps.append({"step": 0, "accuracy": acc, "best_acc": acc, "n_selected": len(subset),
                         "advice_source": "none", "n_flips": 0})
    report.best_acc.append(acc)
    report.best_subset = {"indices": list(subset), "names": [train.feature_names[i] for i in subset],
                          "accuracy": acc, "step": 0}


def _run_irfs(config, train, test, report):
    env = FeatureSelectionEnv(train, test, cart.TreeConfig(), config.learn_config(),
                              seed=config.seed, encoder=config.encoder)
    if config.load:
        qpolicy.load_agents(config.load, env.nets)

    def record(rec):
        best = env.tracker.running[-1]
        report.steps.append({"step": rec.t, "accuracy": rec.accuracy, "best_acc": best,
                             "n_selected": int(rec.actions.sum()), "advice_source": str(rec.advice_source),
                             "n_flips": len(rec.flipped_agents)})
        if rec.t % 100 == 0:
            log.info("%s seed=%d step=%d acc=%.4f best=%.4f", config.mode, config.seed, rec.t, rec.accuracy, best)

    run_irfs(env, config.steps, config.curriculum(), on_step=record)
    report.best_acc = list(env.tracker.running)
    report.best_subset = {"indices": list(env.best_subset),
                          "names": [train.feature_names[i] for i in env.best_subset],
                          "accuracy": env.tracker.trace[env.best_step], "step": env.best_step}
    if config.save:
        qpolicy.save_agents(config.save, env.nets)


def run(config: RunConfig, dataset: Dataset | None = None) -> RunReport:
    """Execute one run; write ``<out>/<mode>-seed<seed>.json`` and ``.trace.csv`` if ``out`` is set."""
    d = dataset if dataset is not None else load_dataset(config)
    split_seed = config.seed if config.split_seed is None else config.split_seed
    train, test = split(d, SplitSpec(config.split, split_seed))
    echo = asdict(config)
    echo["trainer_order"] = list(config.trainer_order)
    echo["T"] = config.T
    report = RunReport(
        config=echo,
        seed=config.seed,
        dataset={"name": d.name, "N": d.N, "num_samples": d.num_samples,
                 "num_classes": d.num_classes, "train_size": train.num_samples,
                 "test_size": test.num_samples, "split_seed": split_seed},
    )
    start = time.perf_counter()
    if config.mode in ONE_SHOT_MODES:
        _run_one_shot(config, train, test, report)
    else:
        _run_irfs(config, train, test, report)
    report.wall_clock_seconds = time.perf_counter() - start
    if config.out:
        write_report(report, config.out)
    return report


def report_stem(report: RunReport) -> str:
    return f"{report.config['mode']}-seed{report.seed}"


def write_report(report: RunReport, out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = report_stem(report)
    (out / f"{stem}.json").write_text(json.dumps(report.to_dict(), indent=1))
    (out / f"{stem}.trace.csv").write_text(report.trace_csv())
    return out / f"{stem}.json"


def read_report(path) -> dict:
    d = json.loads(Path(path).read_text())
    if d.get("schema_version") != SCHEMA_VERSION:
        raise ConfigError(f"{path}: unsupported report schema {d.get('schema_version')!r}")
    return d


def read_trace(path) -> list[dict]:
    """Parse and type-check a trace CSV."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = []
    for r in rows:
        if tuple(r) != TRACE_COLUMNS:
            raise ConfigError(f"{path}: unexpected trace columns {tuple(r)}")
        out.append({"step": int(r["step"]), "accuracy": float(r["accuracy"]),
                    "best_acc": float(r["best_acc"]), "n_selected": int(r["n_selected"]),
                    "advice_source": r["advice_source"], "n_flips": int(r["n_flips"])})
    return out


COMPARE_COLUMNS = ("mode", "checkpoint", "n_seeds", "mean_best_acc", "min_best_acc", "max_best_acc")


def compare(configs, seeds, checkpoints=None, dataset: Dataset | None = None, csv_path=None):
    """Run every config under every seed and aggregate Best Acc at checkpoints.

    Returns ``(rows, reports)`` where ``reports[mode]`` lists one report per
    seed in ``seeds`` order.
    """
    configs = list(configs)
    if not configs:
        raise ConfigError("compare() needs at least one config")
    keys = {(c.data, c.label_col, c.split, c.split_seed) for c in configs}
    if len(keys) > 1:
        raise ConfigError("all configs must share dataset and split settings")
    if len({c.mode for c in configs}) != len(configs):
        raise ConfigError("each mode may appear only once in a comparison")
    L = min(c.steps for c in configs)
    checkpoints = [L] if checkpoints is None else [int(c) for c in checkpoints]
    for c in checkpoints:
        if not 1 <= c <= L:
            raise RangeError(f"checkpoint {c} outside [1, {L}]")
    d = dataset if dataset is not None else load_dataset(configs[0])

    reports: dict[str, list] = {}
    for cfg in configs:
        reports[cfg.mode] = [run(replace(cfg, seed=s), d) for s in seeds]

    rows = []
    for mode, reps in reports.items():
        for c in checkpoints:
            vals = np.array([r.best_at(c) for r in reps])
            rows.append({"mode": mode, "checkpoint": c, "n_seeds": len(reps),
                         "mean_best_acc": float(vals.mean()), "min_best_acc": float(vals.min()),
                         "max_best_acc": float(vals.max())})
    if csv_path is not None:
        Path(csv_path).parent.mkdir(parents=True, exist_ok=True)
        with open(csv_path, "w", newline="") as fh:
            w = csv.DictWriter(fh, COMPARE_COLUMNS, lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
    return rows, reports
