"""Training loop: applies the per-epoch input transform, logs fixed-schema
metrics, and accounts estimated FLOPs alongside.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch
import torch.nn.functional as F

from .data import load_cifar_dir, upsample_to_64
from .model import SmallCNN, config_hash, train_step_flops_per_image
from .schedule import Schedule
from .transforms import apply_transform_batch, restandardize_batch, transform_label

CSV_HEADER = ["epoch", "bandwidth", "magnitude", "train_loss", "val_accuracy", "cumulative_flops"]


class TrainingDiverged(RuntimeError):
    pass


@dataclass
class TrainResult:
    final_accuracy: float
    rows: list[dict]
    extra_curves: dict[str, list[float]] = field(default_factory=dict)
    csv_path: Path | None = None
    model_hash: str = ""


def plan_from_schedule(schedule: Schedule, budget_epochs: int | None = None) -> list[tuple[dict, float]]:
    """Per-epoch (transform, magnitude) list; optionally compressed to a budget.

    With a budget, epoch ``b`` of the short run reads the schedule at the
    proportionally scaled index, so stage fractions are preserved.
    """
    total = schedule.total_epochs
    if budget_epochs is None or budget_epochs >= total:
        return [schedule.lookup(t) for t in range(1, total + 1)]
    return [
        schedule.lookup(max(1, min(total, -(-b * total // budget_epochs))))
        for b in range(1, budget_epochs + 1)
    ]


def _input_size(transform: dict, base: int) -> int:
    if transform["kind"] == "crop":
        return int(transform["B"])
    if transform["kind"] == "downsample":
        return base // int(transform["k"])
    return base


def _evaluate(net: torch.nn.Module, x: np.ndarray, y: np.ndarray, batch: int = 512) -> float:
    net.eval()
    hits = 0
    with torch.no_grad():
        for i in range(0, len(x), batch):
            xa = torch.from_numpy(x[i:i + batch] - 0.5)
            pred = net(xa).argmax(dim=1).numpy()
            hits += int((pred == y[i:i + batch]).sum())
    return hits / len(x)


def train(
    data_dir: str | Path,
    plan: list[tuple[dict, float]],
    seed: int = 0,
    batch_size: int = 128,
    lr: float = 2e-3,
    limit_train: int | None = None,
    limit_val: int | None = None,
    out_csv: str | Path | None = None,
    extra_val_transforms: dict[str, dict] | None = None,
    base: int = 64,
    standardize_inputs: bool = False,
    transform_fn=None,
) -> TrainResult:
    """Train the small CNN under a per-epoch transform plan.

    Every epoch uses all training examples, transformed by that epoch's
    entry; validation is transformed the same way so train and val stay
    identically distributed.  ``extra_val_transforms`` are evaluated on the
    full-size validation set each epoch (for trend reports).
    """
    train_u8, train_y, val_u8, val_y = load_cifar_dir(data_dir)
    if limit_train:
        train_u8, train_y = train_u8[:limit_train], train_y[:limit_train]
    if limit_val:
        val_u8, val_y = val_u8[:limit_val], val_y[:limit_val]
    train_x = upsample_to_64(train_u8).astype(np.float64)
    val_x = upsample_to_64(val_u8).astype(np.float64)
    train_y = train_y.astype(np.int64)
    val_y = val_y.astype(np.int64)

    torch.manual_seed(seed)
    net = SmallCNN()
    optimizer = torch.optim.Adam(net.parameters(), lr=lr)
    annealer = torch.optim.lr_scheduler.CosineAnnealingLR(optimizer, T_max=max(1, len(plan)))
    warmup_steps = max(1, -(-len(train_x) // batch_size))  # one warmup epoch, any T

    reference_std = float((train_x - train_x.mean(axis=(2, 3), keepdims=True)).std())
    batch_transform = transform_fn if transform_fn is not None else apply_transform_batch

    def finish(arr: np.ndarray) -> np.ndarray:
        if standardize_inputs:
            arr = restandardize_batch(arr, reference_std)
        return arr.astype(np.float32)

    transform_cache: dict[str, tuple[np.ndarray, np.ndarray]] = {}

    def transformed(transform: dict) -> tuple[np.ndarray, np.ndarray]:
        key = json.dumps(transform, sort_keys=True)
        if key not in transform_cache:
            transform_cache[key] = (
                finish(batch_transform(train_x, transform)),
                finish(batch_transform(val_x, transform)),
            )
        return transform_cache[key]

    extra_cache = {
        name: finish(batch_transform(val_x, tf))
        for name, tf in (extra_val_transforms or {}).items()
    }

    rows: list[dict] = []
    extra_curves: dict[str, list[float]] = {name: [] for name in extra_cache}
    cumulative_flops = 0.0
    final_accuracy = 0.0

    for epoch, (transform, magnitude) in enumerate(plan, start=1):
        xt, vt = transformed(transform)
        order = np.random.default_rng((seed, epoch)).permutation(len(xt))
        net.train()
        losses = []
        for step, i in enumerate(range(0, len(order), batch_size)):
            if epoch == 1:
                scale = (step + 1) / warmup_steps
                for group in optimizer.param_groups:
                    group["lr"] = lr * scale
            idx = order[i:i + batch_size]
            xa = torch.from_numpy(xt[idx] - 0.5)
            ya = torch.from_numpy(train_y[idx])
            optimizer.zero_grad()
            loss = F.cross_entropy(net(xa), ya)
            loss.backward()
            optimizer.step()
            losses.append(float(loss.detach()))
        annealer.step()
        train_loss = float(np.mean(losses))
        cumulative_flops += train_step_flops_per_image(_input_size(transform, base)) * len(xt)
        val_accuracy = _evaluate(net, vt, val_y)
        final_accuracy = val_accuracy
        rows.append(
            {
                "epoch": epoch,
                "bandwidth": transform_label(transform, base),
                "magnitude": magnitude,
                "train_loss": train_loss,
                "val_accuracy": val_accuracy,
                "cumulative_flops": cumulative_flops,
            }
        )
        for name, vx in extra_cache.items():
            extra_curves[name].append(_evaluate(net, vx, val_y))
        if not np.isfinite(train_loss):
            _write_csv(out_csv, rows)
            raise TrainingDiverged(f"loss is not finite at epoch {epoch}; log retained")

    path = _write_csv(out_csv, rows)
    return TrainResult(final_accuracy, rows, extra_curves, path, config_hash())


def _write_csv(out_csv, rows) -> Path | None:
    if out_csv is None:
        return None
    path = Path(out_csv)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_HEADER)
        writer.writeheader()
        writer.writerows(rows)
    return path
