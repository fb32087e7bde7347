"""Directional frequency-bias checks over a set of training runs.

Three pre-registered checks, each a direction rather than an exact value:

1. matched-band dynamics: train one baseline model, evaluate every epoch
   on low-pass and high-pass filtered validation sets whose radii are
   tuned so the *final* accuracies match; early in training the low-pass
   accuracy must lead.
2. low-pass-trained warm start: a model trained on generously low-pass
   filtered data must track the baseline closely over the first fifth of
   training.
3. high-pass handicap: a model trained on high-pass filtered data must sit
   below the baseline at every evaluated epoch.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .data import load_cifar_dir, upsample_to_64
from .schedule import identity_schedule_dict, parse_schedule
from .train import plan_from_schedule, train
from .transforms import apply_transform_batch, highpass_batch, lowpass_batch


@dataclass
class TrendConfig:
    data_dir: Path
    out_dir: Path
    epochs: int = 12
    seed: int = 0
    limit_train: int | None = None
    limit_val: int | None = None
    low_radius_grid: tuple[float, ...] = (3.0, 4.0, 5.0, 6.0)
    high_radius_grid: tuple[float, ...] = (3.5, 4.0, 5.0)
    generous_low_radius: float = 12.0
    highpass_train_radius: float = 3.5
    # pre-registered thresholds; directions only, never exact accuracies
    early_fraction: float = 0.2
    matched_final_tolerance: float = 0.02
    lowpass_early_gap: float = 0.02
    highpass_check_start_epoch: int = 2
    lr: float = 1.5e-3


def _identity_plan(config: TrendConfig):
    return plan_from_schedule(parse_schedule(identity_schedule_dict(config.epochs)))


def _filtered_plan(config: TrendConfig, kind: str, radius: float):
    transform = {"kind": kind, "r": radius}
    return [(transform, 0.0) for _ in range(config.epochs)]


def _composite_transform_fn(config: TrendConfig):
    """Filtered bands are composited onto the train-mean complement.

    Zeroing a whole band leaves images far outside the training pixel
    statistics; splicing the class-agnostic mean content back in keeps
    them in distribution so filtered-set accuracy measures information
    content, not distribution shift.
    """
    train_u8, _, _, _ = load_cifar_dir(config.data_dir)
    if config.limit_train:
        train_u8 = train_u8[: config.limit_train]
    mean_img = upsample_to_64(train_u8).astype(np.float64).mean(axis=0, keepdims=True)

    def transform(x: np.ndarray, spec: dict) -> np.ndarray:
        kind = spec["kind"]
        if kind == "lowpass":
            r = float(spec["r"])
            return lowpass_batch(x, r) + highpass_batch(np.repeat(mean_img, len(x), 0), r)
        if kind == "highpass":
            r = float(spec["r"])
            return highpass_batch(x, r) + lowpass_batch(np.repeat(mean_img, len(x), 0), r)
        return apply_transform_batch(x, spec)

    return transform


def run_trends(config: TrendConfig) -> dict:
    config.out_dir.mkdir(parents=True, exist_ok=True)
    early_epoch = max(1, math.ceil(config.early_fraction * config.epochs))
    # all trend runs share one seed, the contrast-standardized protocol and
    # mean-composited filtering, so curve differences come from the band
    # content alone
    common = dict(
        data_dir=config.data_dir,
        seed=config.seed,
        limit_train=config.limit_train,
        limit_val=config.limit_val,
        standardize_inputs=True,
        lr=config.lr,
        transform_fn=_composite_transform_fn(config),
    )

    extra = {f"low_{r:g}": {"kind": "lowpass", "r": r} for r in config.low_radius_grid}
    extra |= {f"high_{r:g}": {"kind": "highpass", "r": r} for r in config.high_radius_grid}
    baseline = train(
        plan=_identity_plan(config),
        out_csv=config.out_dir / "baseline.csv",
        extra_val_transforms=extra,
        **common,
    )

    # tune the two radii for equal final accuracy, then compare early epochs
    best = None
    for rl in config.low_radius_grid:
        for rh in config.high_radius_grid:
            gap = abs(baseline.extra_curves[f"low_{rl:g}"][-1] - baseline.extra_curves[f"high_{rh:g}"][-1])
            if best is None or gap < best[0]:
                best = (gap, rl, rh)
    final_gap, r_low, r_high = best
    low_curve = baseline.extra_curves[f"low_{r_low:g}"]
    high_curve = baseline.extra_curves[f"high_{r_high:g}"]
    check1 = {
        "name": "low-pass val leads high-pass val early under matched finals",
        "matched_final_gap": final_gap,
        "matched_within_tolerance": final_gap <= config.matched_final_tolerance,
        "r_low": r_low,
        "r_high": r_high,
        "early_epoch": early_epoch,
        "low_at_early": low_curve[early_epoch - 1],
        "high_at_early": high_curve[early_epoch - 1],
        "passed": bool(low_curve[early_epoch - 1] > high_curve[early_epoch - 1]),
    }

    lowpass_run = train(
        plan=_filtered_plan(config, "lowpass", config.generous_low_radius),
        out_csv=config.out_dir / "lowpass_trained.csv",
        **common,
    )
    base_acc = [row["val_accuracy"] for row in baseline.rows]
    low_acc = [row["val_accuracy"] for row in lowpass_run.rows]
    # aggregate the window before differencing: single-epoch accuracies are
    # chaotic during the steep phase, the curve's early position is not
    base_early = sum(base_acc[:early_epoch]) / early_epoch
    low_early = sum(low_acc[:early_epoch]) / early_epoch
    check2 = {
        "name": "low-pass-trained run tracks the baseline early",
        "generous_radius": config.generous_low_radius,
        "early_epochs": early_epoch,
        "baseline_early_mean": base_early,
        "lowpass_early_mean": low_early,
        "early_window_gap": abs(base_early - low_early),
        "passed": bool(abs(base_early - low_early) <= config.lowpass_early_gap),
    }

    highpass_run = train(
        plan=_filtered_plan(config, "highpass", config.highpass_train_radius),
        out_csv=config.out_dir / "highpass_trained.csv",
        **common,
    )
    high_acc = [row["val_accuracy"] for row in highpass_run.rows]
    start = config.highpass_check_start_epoch - 1
    below = [h < b for h, b in zip(high_acc[start:], base_acc[start:])]
    check3 = {
        "name": "high-pass-trained run stays below the baseline throughout",
        "train_radius": config.highpass_train_radius,
        "first_evaluated_epoch": config.highpass_check_start_epoch,
        "epochs_below": sum(below),
        "epochs_total": len(below),
        "passed": bool(all(below)),
    }

    curves_path = config.out_dir / "trend_curves.csv"
    with curves_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["epoch", "baseline", "lowpass_trained", "highpass_trained",
             f"baseline_on_low_r{r_low:g}", f"baseline_on_high_r{r_high:g}"]
        )
        for i in range(config.epochs):
            writer.writerow(
                [i + 1, base_acc[i], low_acc[i], high_acc[i], low_curve[i], high_curve[i]]
            )

    report = {
        "epochs": config.epochs,
        "seed": config.seed,
        "model": baseline.model_hash,
        "thresholds": {
            "early_fraction": config.early_fraction,
            "matched_final_tolerance": config.matched_final_tolerance,
            "lowpass_early_gap": config.lowpass_early_gap,
            "highpass_check_start_epoch": config.highpass_check_start_epoch,
            "standardized_inputs": True,
            "mean_composited_filters": True,
        },
        "checks": [check1, check2, check3],
        "curves_csv": str(curves_path),
    }
    (config.out_dir / "trend_report.json").write_text(json.dumps(report, indent=2) + "\n")
    return report
