"""Trainer command line: dataset generation, training, the accuracy oracle,
and the trend report.

The ``oracle`` subcommand implements the external accuracy-query contract:
one decimal in [0, 1] on stdout, exit 0; any failure exits nonzero with
nothing on stdout.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .data import DatasetError, write_cifar_batches
from .schedule import (
    ScheduleError,
    identity_schedule_dict,
    load_schedule,
    save_schedule_dict,
    scaled_schedule_dict,
)
from .train import TrainingDiverged, plan_from_schedule, train
from .trends import TrendConfig, run_trends

ORACLE_BUDGET_EPOCHS = 6
ORACLE_LIMIT_TRAIN = 1500
ORACLE_LIMIT_VAL = 800


def _data_dir(arg: str | None) -> Path:
    return Path(arg or os.environ.get("TOYTRAINER_DATA", "toy-data"))


def _cmd_gen_data(args) -> int:
    write_cifar_batches(args.out, n_train=args.train, n_test=args.test, seed=args.seed)
    print(f"wrote synthetic CIFAR-format batches to {args.out}")
    return 0


def _cmd_make_schedule(args) -> int:
    if args.kind == "scaled":
        obj = scaled_schedule_dict(args.epochs, base=args.base)
    else:
        obj = identity_schedule_dict(args.epochs, base=args.base)
    save_schedule_dict(obj, args.out)
    print(f"wrote {args.out}")
    return 0


def _cmd_train(args) -> int:
    schedule = load_schedule(args.schedule)
    result = train(
        data_dir=_data_dir(args.data),
        plan=plan_from_schedule(schedule, budget_epochs=args.budget_epochs),
        seed=args.seed,
        limit_train=args.limit_train,
        limit_val=args.limit_val,
        out_csv=args.out,
        base=schedule.base_resolution,
    )
    print(f"final_accuracy={result.final_accuracy:.4f}")
    print(f"cumulative_flops={result.rows[-1]['cumulative_flops']:.3e}")
    print(f"model={result.model_hash}")
    if result.csv_path:
        print(f"metrics={result.csv_path}")
    return 0


def _cmd_oracle(args) -> int:
    # contract: a single decimal on stdout on success; silence + nonzero otherwise
    try:
        schedule = load_schedule(args.schedule)
        result = train(
            data_dir=_data_dir(args.data),
            plan=plan_from_schedule(schedule, budget_epochs=ORACLE_BUDGET_EPOCHS),
            seed=args.seed,
            limit_train=ORACLE_LIMIT_TRAIN,
            limit_val=ORACLE_LIMIT_VAL,
            base=schedule.base_resolution,
        )
    except (OSError, ScheduleError, DatasetError, TrainingDiverged, ValueError) as exc:
        print(f"oracle error: {exc}", file=sys.stderr)
        return 1
    print(f"{result.final_accuracy:.4f}")
    return 0


def _cmd_trends(args) -> int:
    config = TrendConfig(
        data_dir=_data_dir(args.data),
        out_dir=Path(args.out),
        epochs=args.epochs,
        seed=args.seed,
        limit_train=args.limit_train,
        limit_val=args.limit_val,
    )
    report = run_trends(config)
    for check in report["checks"]:
        status = "PASS" if check["passed"] else "FAIL"
        print(f"[{status}] {check['name']}")
    print(f"report: {config.out_dir / 'trend_report.json'}")
    return 0 if all(c["passed"] for c in report["checks"]) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toytrainer", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-data", help="write a synthetic CIFAR-format dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--train", type=int, default=3000)
    p.add_argument("--test", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_gen_data)

    p = sub.add_parser("make-schedule", help="write a desk-scale schedule JSON")
    p.add_argument("--kind", choices=("scaled", "identity"), default="scaled")
    p.add_argument("--epochs", type=int, required=True)
    p.add_argument("--base", type=int, default=64)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_make_schedule)

    p = sub.add_parser("train", help="train the small CNN under a schedule")
    p.add_argument("--schedule", required=True)
    p.add_argument("--data")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget-epochs", type=int, default=None)
    p.add_argument("--limit-train", type=int, default=None)
    p.add_argument("--limit-val", type=int, default=None)
    p.add_argument("--out", help="metrics CSV path")
    p.set_defaults(fn=_cmd_train)

    p = sub.add_parser("oracle", help="schedule accuracy oracle (decimal on stdout)")
    p.add_argument("schedule")
    p.add_argument("--data")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_oracle)

    p = sub.add_parser("trends", help="run the frequency-bias trend report")
    p.add_argument("--data")
    p.add_argument("--out", required=True)
    p.add_argument("--epochs", type=int, default=12)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--limit-train", type=int, default=None)
    p.add_argument("--limit-val", type=int, default=None)
    p.set_defaults(fn=_cmd_trends)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (OSError, ScheduleError, DatasetError, TrainingDiverged, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
