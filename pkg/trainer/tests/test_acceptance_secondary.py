"""Secondary acceptance gate: cross-boundary equivalence with the main
toolkit, the desk-scale curriculum savings, and the frequency-bias trends.

Run with ``pytest trainer/tests/test_acceptance_secondary.py -v -s``.  The
training-based tests take several minutes each on a CPU desktop.
"""

import json
import statistics
import subprocess
import sys
import time

import numpy as np
import pytest

from toytrainer import (
    TrendConfig,
    crop_batch,
    downsample_mean_batch,
    highpass_batch,
    lowpass_batch,
    parse_schedule,
    plan_from_schedule,
    run_trends,
    save_schedule_dict,
    scaled_schedule_dict,
    identity_schedule_dict,
    train,
    write_cifar_batches,
)

SEED = 20240817


def _report(name: str, started: float, budget: float):
    elapsed = time.monotonic() - started
    assert elapsed < budget, f"{name}: took {elapsed:.1f}s, budget {budget}s"
    print(f"[ACCEPTANCE/secondary] {name}: PASS ({elapsed:.1f}s)")


@pytest.fixture(scope="module")
def desk_data(tmp_path_factory):
    path = tmp_path_factory.mktemp("deskdata")
    write_cifar_batches(path, n_train=2500, n_test=800, seed=0)
    return path


def _primary_cli(args):
    proc = subprocess.run(
        [sys.executable, "-m", "freqtrain.cli", *args], capture_output=True, text=True
    )
    assert proc.returncode == 0, proc.stderr
    return proc


def _read_outputs(out_dir):
    from freqtrain.io import read_tensor

    return np.stack([read_tensor(p) for p in sorted(out_dir.glob("*.etns"))])


def test_cross_boundary_transform_equivalence(tmp_path):
    started = time.monotonic()
    from freqtrain.io import write_tensor

    rng = np.random.default_rng(SEED)
    batch = rng.random((100, 3, 64, 64))
    in_dir = tmp_path / "in"
    in_dir.mkdir()
    files = []
    for i in range(100):
        path = in_dir / f"x{i:03d}.etns"
        write_tensor(path, batch[i])
        files.append(str(path))

    sched = {
        "total_epochs": 2,
        "base_resolution": 64,
        "stages": [
            {"start": 1, "end": 1, "transform": {"kind": "crop", "B": 32}},
            {"start": 2, "end": 2, "transform": {"kind": "crop", "B": 64}},
        ],
        "magnitude": {"m0": 9.0, "kind": "linear"},
    }
    sched_path = tmp_path / "sched.json"
    save_schedule_dict(sched, sched_path)

    out = tmp_path / "crop"
    _primary_cli(["transform", "--schedule", str(sched_path), "--epoch", "1",
                  "--no-augment", "--out", str(out)] + files)
    assert np.max(np.abs(_read_outputs(out) - crop_batch(batch, 32))) <= 1e-6

    out = tmp_path / "low"
    _primary_cli(["filter", "--mode", "low", "--radius", "6", "--out", str(out)] + files)
    assert np.max(np.abs(_read_outputs(out) - lowpass_batch(batch, 6.0))) <= 1e-6

    out = tmp_path / "high"
    _primary_cli(["filter", "--mode", "high", "--radius", "6", "--out", str(out)] + files)
    assert np.max(np.abs(_read_outputs(out) - highpass_batch(batch, 6.0))) <= 1e-6

    out = tmp_path / "down"
    _primary_cli(["downsample", "--factor", "2", "--kernel", "mean", "--out", str(out)] + files)
    assert np.max(np.abs(_read_outputs(out) - downsample_mean_batch(batch, 2))) <= 1e-6

    _report("trainer transforms match the main CLI within 1e-6 (100 images)", started, 60.0)


def test_flops_accounting_matches_cost_model(tmp_path):
    started = time.monotonic()
    sched_path = tmp_path / "scaled.json"
    save_schedule_dict(scaled_schedule_dict(14), sched_path)
    proc = _primary_cli(["cost", "--schedule", str(sched_path)])
    model_cost = json.loads(proc.stdout)["cost"]

    from toytrainer.model import train_step_flops_per_image

    plan = plan_from_schedule(parse_schedule(scaled_schedule_dict(14)))
    flops = sum(train_step_flops_per_image(int(t["B"])) for t, _ in plan)
    full = train_step_flops_per_image(64) * len(plan)
    assert flops / full == pytest.approx(model_cost, rel=0.01)
    _report("trainer FLOPs accounting matches the quadratic cost model within 1%", started, 10.0)


def test_desk_scale_curriculum_savings(desk_data):
    started = time.monotonic()
    identity_plan = plan_from_schedule(parse_schedule(identity_schedule_dict(14)))
    scaled_plan = plan_from_schedule(parse_schedule(scaled_schedule_dict(14)))
    gaps = []
    ratios = []
    for seed in (1, 2, 3):
        base = train(desk_data, identity_plan, seed=seed, lr=3e-3)
        fast = train(desk_data, scaled_plan, seed=seed, lr=3e-3)
        gaps.append(fast.final_accuracy - base.final_accuracy)
        ratios.append(fast.rows[-1]["cumulative_flops"] / base.rows[-1]["cumulative_flops"])
        print(
            f"  seed {seed}: identity {base.final_accuracy:.4f}, "
            f"curriculum {fast.final_accuracy:.4f}, flops ratio {ratios[-1]:.3f}"
        )
    assert statistics.median(gaps) >= -0.01, gaps
    assert statistics.median(ratios) <= 0.70, ratios
    _report("scaled curriculum within 1% of identity at <=0.70x FLOPs (median of 3 seeds)",
            started, 1800.0)


def test_frequency_bias_trends(desk_data, tmp_path):
    started = time.monotonic()
    config = TrendConfig(
        data_dir=desk_data,
        out_dir=tmp_path / "trends",
        epochs=14,
        seed=0,
        limit_val=800,
    )
    report = run_trends(config)
    for check in report["checks"]:
        print(f"  {check['name']}: {'PASS' if check['passed'] else 'FAIL'}")
    matched = report["checks"][0]
    assert matched["matched_within_tolerance"], matched
    assert matched["passed"], matched
    assert report["checks"][1]["passed"], report["checks"][1]
    assert report["checks"][2]["passed"], report["checks"][2]
    assert (tmp_path / "trends" / "trend_curves.csv").exists()
    _report("frequency-bias trends: all three directional checks", started, 2700.0)
