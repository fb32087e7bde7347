"""Command-line surface tying the library together.

Exit codes: 0 success (including jobs with recorded per-file errors),
1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io as fio
from .augment import DEFAULT_OPS, AugPolicy, randaug
from .curriculum import (
    efficienttrain_schedule,
    load_schedule,
    relative_cost,
    save_schedule,
    schedule_to_json,
)
from .errors import FreqTrainError
from .pipeline import JobManifest, apply_transform, manifest_from_json, run_transform_job
from .resample import KERNEL_NAMES, KernelSpec, leakage_report
from .search import OracleSpec, SearchConfig, greedy_search
from .curriculum import Downsample, HighPass, LowPass


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonneg_float(text: str) -> float:
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative number, got {text}")
    return value


def _emit(payload: str, out: str | None):
    if out:
        Path(out).write_text(payload + "\n", encoding="utf-8")
    else:
        print(payload)


def _batch(args, transform, suffix: str):
    """Apply one fixed transform to every input file."""
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    errors = []
    for index, src in enumerate(Path(p) for p in args.inputs):
        try:
            image = apply_transform(fio.load_image(src), transform)
            dest = out_dir / f"{index:05d}_{src.stem}{suffix}"
            if args.emit_png:
                fio.save_png(dest.with_suffix(".png"), image)
            else:
                fio.write_tensor(dest, image.data)
        except (FreqTrainError, OSError) as exc:
            errors.append((src, str(exc)))
    for src, msg in errors:
        print(f"warning: {src}: {msg}", file=sys.stderr)
    print(f"processed {len(args.inputs) - len(errors)}/{len(args.inputs)} files -> {out_dir}")
    return 0


def _cmd_transform(args) -> int:
    if args.manifest:
        manifest = manifest_from_json(args.manifest)
    else:
        if not (args.schedule and args.epoch and args.out and args.inputs):
            print("transform: need --schedule, --epoch, --out and input files (or --manifest)", file=sys.stderr)
            return 2
        manifest = JobManifest(
            inputs=tuple(Path(p) for p in args.inputs),
            schedule_path=Path(args.schedule),
            epoch=args.epoch,
            out_dir=Path(args.out),
            workers=args.workers,
            seed=args.seed,
            apply_augment=not args.no_augment,
            emit_png=args.emit_png,
        )
    summary = run_transform_job(manifest)
    for src, msg in summary.errors:
        print(f"warning: {src}: {msg}", file=sys.stderr)
    print(f"transformed {len(summary.outputs)}/{len(manifest.inputs)} files -> {manifest.out_dir}")
    return 0


def _cmd_filter(args) -> int:
    transform = LowPass(args.radius) if args.mode == "low" else HighPass(args.radius)
    return _batch(args, transform, ".etns")


def _cmd_downsample(args) -> int:
    return _batch(args, Downsample(args.factor, args.kernel), ".etns")


def _cmd_schedule(args) -> int:
    schedule = efficienttrain_schedule(args.epochs)
    if args.out:
        save_schedule(schedule, args.out)
        print(f"wrote {args.out}")
    else:
        print(schedule_to_json(schedule))
    return 0


def _cmd_cost(args) -> int:
    cost, speedup = relative_cost(load_schedule(args.schedule))
    _emit(json.dumps({"cost": round(cost, 6), "speedup": round(speedup, 6)}), args.out)
    return 0


def _cmd_leakage(args) -> int:
    kernel = KernelSpec.named(args.kernel, args.factor)
    report = leakage_report(kernel, args.size, args.size if args.width is None else args.width)
    _emit(report.to_json() if args.format == "json" else report.to_table(), args.out)
    return 0


def _cmd_search(args) -> int:
    if args.table:
        raw = json.loads(Path(args.table).read_text(encoding="utf-8"))
        table = {tuple(int(b) for b in key.split(",")): float(v) for key, v in raw.items()}
        oracle = OracleSpec(mode="table", table=table)
    elif args.oracle_cmd:
        oracle = OracleSpec(mode="command", argv=tuple(args.oracle_cmd), timeout=args.timeout)
    else:
        print("search: need --table or --oracle-cmd", file=sys.stderr)
        return 2
    config = SearchConfig(
        total_epochs=args.epochs,
        n_stages=args.stages,
        candidates=tuple(int(b) for b in args.candidates.split(",")),
        baseline_accuracy=args.a0,
        oracle=oracle,
        base_resolution=args.base,
        cache_path=Path(args.cache) if args.cache else None,
    )
    result = greedy_search(config)
    payload = {
        "bandwidths": list(result.bandwidths),
        "oracle_calls": result.oracle_calls,
        "accuracy": result.accuracy,
        "feasible": result.feasible,
        "infeasible_stages": list(result.infeasible_stages),
        "infeasible_at_every_stage": result.infeasible_at_every_stage,
        "trace": [
            {
                "stage": e.stage,
                "candidate": e.candidate,
                "vector": list(e.vector),
                "accuracy": e.accuracy,
                "cached": e.cached,
            }
            for e in result.trace
        ],
    }
    _emit(json.dumps(payload, indent=2), args.out)
    return 0


def _cmd_augment(args) -> int:
    policy = AugPolicy(
        op_set=DEFAULT_OPS,
        n_ops=args.n_ops,
        magnitude=args.magnitude,
        magnitude_std=args.std,
        seed=args.seed,
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    errors = []
    for index, src in enumerate(Path(p) for p in args.inputs):
        try:
            image = randaug(fio.load_image(src), policy, index=index)
            if args.emit_png:
                fio.save_png(out_dir / f"{index:05d}_{src.stem}.png", image)
            else:
                fio.write_tensor(out_dir / f"{index:05d}_{src.stem}.etns", image.data)
        except (FreqTrainError, OSError) as exc:
            errors.append((src, str(exc)))
    for src, msg in errors:
        print(f"warning: {src}: {msg}", file=sys.stderr)
    print(f"augmented {len(args.inputs) - len(errors)}/{len(args.inputs)} files -> {out_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="freqtrain", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_inputs=True):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--workers", type=_positive_int, default=1)
        p.add_argument("--out", required=with_inputs, help="output directory or file")
        if with_inputs:
            p.add_argument("--emit-png", action="store_true", help="requantize outputs to PNG")
            p.add_argument("inputs", nargs="*", help="input PNG/PGM/ETNS files")

    p = sub.add_parser("transform", help="apply a schedule's epoch-t transform to files")
    p.add_argument("--manifest", help="job manifest JSON (overrides the flags)")
    p.add_argument("--schedule", help="schedule JSON path")
    p.add_argument("--epoch", type=_positive_int)
    p.add_argument("--no-augment", action="store_true", help="skip magnitude-scheduled augmentation")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--out", help="output directory (or use --manifest)")
    p.add_argument("--emit-png", action="store_true", help="requantize outputs to PNG")
    p.add_argument("inputs", nargs="*", help="input PNG/PGM/ETNS files")
    p.set_defaults(fn=_cmd_transform)

    p = sub.add_parser("filter", help="circular low/high-pass filter files")
    p.add_argument("--mode", choices=("low", "high"), required=True)
    p.add_argument("--radius", type=_nonneg_float, required=True)
    common(p)
    p.set_defaults(fn=_cmd_filter)

    p = sub.add_parser("downsample", help="kernel-model down-sample files")
    p.add_argument("--factor", type=_positive_int, required=True)
    p.add_argument("--kernel", choices=KERNEL_NAMES, default="mean")
    common(p)
    p.set_defaults(fn=_cmd_downsample)

    p = sub.add_parser("schedule", help="emit the standard curriculum for an epoch budget")
    p.add_argument("--epochs", type=_positive_int, required=True)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_schedule)

    p = sub.add_parser("cost", help="relative training cost of a schedule")
    p.add_argument("--schedule", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_cost)

    p = sub.add_parser("leakage", help="spectral leakage report for a down-sampling kernel")
    p.add_argument("--size", type=_positive_int, required=True, help="spectrum height (and width unless --width)")
    p.add_argument("--width", type=_positive_int)
    p.add_argument("--factor", type=_positive_int, required=True)
    p.add_argument("--kernel", choices=KERNEL_NAMES, default="nearest")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_leakage)

    p = sub.add_parser("search", help="greedy bandwidth-schedule search against an oracle")
    p.add_argument("--epochs", type=_positive_int, required=True)
    p.add_argument("--stages", type=_positive_int, required=True)
    p.add_argument("--candidates", required=True, help="comma-separated even bandwidths, max = base")
    p.add_argument("--a0", type=float, required=True, help="baseline accuracy floor")
    p.add_argument("--base", type=_positive_int, default=224)
    p.add_argument("--table", help="JSON accuracy table keyed by comma-joined bandwidth vectors")
    p.add_argument("--oracle-cmd", nargs="+", help="oracle argv; '{schedule}' expands to a schedule file")
    p.add_argument("--timeout", type=float, default=None)
    p.add_argument("--cache", help="JSON cache file for oracle answers")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_search)

    p = sub.add_parser("augment", help="apply magnitude-parameterized random augmentation")
    p.add_argument("--magnitude", type=_nonneg_float, required=True)
    p.add_argument("--std", type=_nonneg_float, default=0.5)
    p.add_argument("--n-ops", type=_positive_int, default=2)
    common(p)
    p.set_defaults(fn=_cmd_augment)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except FreqTrainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
