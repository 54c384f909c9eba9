"""Command line entry point.

    irfs run --data spambase.csv --mode irfs-hybrid --steps 1500 --seed 0 --out runs/
    irfs compare --data spambase.csv --modes irfs-hybrid,marlfs,kbest --seeds 0,1,2 \
        --checkpoints 300,1500 --out runs/

Exit codes: 2 configuration error, 3 data error, 4 runtime error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import harness
from .errors import ConfigError, DataError, IRFSError, RangeError

EXIT_CONFIG, EXIT_DATA, EXIT_RUNTIME = 2, 3, 4


def _int_list(text):
    try:
        return [int(x) for x in text.replace(";", ",").split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from None


def _label(text):
    return int(text) if text.lstrip("-").isdigit() else text


def _add_run_flags(p):
    p.add_argument("--data", required=True, help="CSV file")
    p.add_argument("--label-col", type=_label, default=-1, help="label column name or index (default: last)")
    p.add_argument("--has-header", action=argparse.BooleanOptionalAction, default=None,
                   help="force header detection on/off (default: auto)")
    p.add_argument("--steps", type=int, default=1500, help="exploration steps L")
    p.add_argument("--transfer", type=int, default=None, help="transfer point T (default: steps // 3)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--split-seed", type=int, default=None, help="train/test split seed (default: --seed)")
    p.add_argument("--split", type=float, default=0.9, help="train fraction")
    p.add_argument("--bins", type=int, default=10, help="quantile bins for mutual information")
    p.add_argument("--epsilon", type=float, default=0.9, help="probability of the greedy action")
    p.add_argument("--gamma", type=float, default=0.9)
    p.add_argument("--lr", type=float, default=0.01)
    p.add_argument("--batch", type=int, default=16)
    p.add_argument("--k", type=int, default=None, help="subset size for one-shot baselines (default: N // 2)")
    p.add_argument("--trainer-order", default="kbest,dtree", help="hybrid teaching order, e.g. dtree,kbest")
    p.add_argument("--encoder", choices=("meta", "graph"), default="meta")
    p.add_argument("--out", default=None, help="output directory for reports and traces")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="irfs", description="Interactive reinforced feature selection")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="one run of one mode")
    _add_run_flags(p_run)
    p_run.add_argument("--mode", choices=harness.MODES, default="irfs-hybrid")
    p_run.add_argument("--save", default=None, help="write agent checkpoint (JSON) after the run")
    p_run.add_argument("--load", default=None, help="load agent checkpoint before the run")

    p_cmp = sub.add_parser("compare", help="several modes over several seeds")
    _add_run_flags(p_cmp)
    p_cmp.add_argument("--modes", default="irfs-hybrid,marlfs,kbest,dtrfe,mrmr")
    p_cmp.add_argument("--seeds", type=_int_list, default=[0])
    p_cmp.add_argument("--checkpoints", type=_int_list, default=None, help="default: --steps")
    return parser


def _config(args, mode, **extra) -> harness.RunConfig:
    return harness.RunConfig(
        data=args.data, label_col=args.label_col, has_header=args.has_header, mode=mode,
        steps=args.steps, transfer=args.transfer, seed=args.seed, split_seed=args.split_seed,
        split=args.split, bins=args.bins, epsilon=args.epsilon, gamma=args.gamma, lr=args.lr,
        batch=args.batch, k=args.k, trainer_order=tuple(args.trainer_order.split(",")),
        encoder=args.encoder, **extra,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(levelname)s %(message)s")
    try:
        if args.command == "run":
            cfg = _config(args, args.mode, out=args.out, save=args.save, load=args.load)
            report = harness.run(cfg)
            print(json.dumps({"mode": cfg.mode, "seed": cfg.seed, "best_acc": report.best_acc[-1],
                              "best_subset": report.best_subset["names"],
                              "seconds": round(report.wall_clock_seconds, 2)}))
        else:
            modes = [m.strip() for m in args.modes.split(",") if m.strip()]
            configs = [_config(args, m, out=args.out) for m in modes]
            csv_path = Path(args.out) / "comparison.csv" if args.out else None
            rows, _ = harness.compare(configs, args.seeds, args.checkpoints, csv_path=csv_path)
            print(",".join(harness.COMPARE_COLUMNS))
            for r in rows:
                print(",".join(str(r[c]) for c in harness.COMPARE_COLUMNS))
    except (ConfigError, RangeError, argparse.ArgumentTypeError) as exc:
        print(f"irfs: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, FileNotFoundError) as exc:
        print(f"irfs: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except IRFSError as exc:
        print(f"irfs: runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return 0


if __name__ == "__main__":
    sys.exit(main())
