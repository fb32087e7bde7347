"""Batch transform jobs: manifest, per-file work, and the parallel driver.

Per-file work is pure and keyed by the file's position in the input list,
so the worker count never changes the bytes written.  Individual file
failures are recorded and the job continues; only an invalid schedule
aborts the whole job.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import io as fio
from .augment import DEFAULT_OPS, AugPolicy, randaug
from .curriculum import (
    Crop,
    Downsample,
    HighPass,
    Identity,
    LowPass,
    Schedule,
    TransformSpec,
    load_schedule,
    lookup,
    transform_to_dict,
)
from .errors import ConfigError, FreqTrainError
from .image import ImageTensor
from .resample import KernelSpec, downsample
from .spectral import high_pass_filter, low_frequency_crop, low_pass_filter


@dataclass(frozen=True)
class JobManifest:
    inputs: tuple[Path, ...]
    schedule_path: Path
    epoch: int
    out_dir: Path
    workers: int = 1
    seed: int = 0
    apply_augment: bool = True
    emit_png: bool = False

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(Path(p) for p in self.inputs))
        object.__setattr__(self, "schedule_path", Path(self.schedule_path))
        object.__setattr__(self, "out_dir", Path(self.out_dir))
        if self.workers < 1:
            raise ConfigError(f"worker count must be >= 1, got {self.workers}")
        if not self.inputs:
            raise ConfigError("job has no input files")


_MANIFEST_FIELDS = {"inputs", "schedule", "epoch", "out_dir", "workers", "seed", "augment", "emit_png"}


def manifest_from_json(path: str | Path) -> JobManifest:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    unknown = set(obj) - _MANIFEST_FIELDS
    if unknown:
        raise ConfigError(f"unknown fields {sorted(unknown)} in job manifest")
    for key in ("inputs", "schedule", "epoch", "out_dir"):
        if key not in obj:
            raise ConfigError(f"job manifest missing '{key}'")
    return JobManifest(
        inputs=tuple(Path(p) for p in obj["inputs"]),
        schedule_path=Path(obj["schedule"]),
        epoch=int(obj["epoch"]),
        out_dir=Path(obj["out_dir"]),
        workers=int(obj.get("workers", 1)),
        seed=int(obj.get("seed", 0)),
        apply_augment=bool(obj.get("augment", True)),
        emit_png=bool(obj.get("emit_png", False)),
    )


def apply_transform(image: ImageTensor, transform: TransformSpec) -> ImageTensor:
    """Apply one schedule transform to an image."""
    if isinstance(transform, Identity):
        return image
    if isinstance(transform, Crop):
        if transform.B == image.height == image.width:
            return image  # identity crop, skip the transform round trip
        return low_frequency_crop(image, transform.B)
    if isinstance(transform, LowPass):
        return low_pass_filter(image, transform.r)
    if isinstance(transform, HighPass):
        return high_pass_filter(image, transform.r)
    if isinstance(transform, Downsample):
        return downsample(image, KernelSpec.named(transform.kernel, transform.k))
    raise ConfigError(f"unknown transform {transform!r}")


@dataclass
class JobSummary:
    outputs: list[Path] = field(default_factory=list)
    errors: list[tuple[Path, str]] = field(default_factory=list)


def run_transform_job(manifest: JobManifest, schedule: Schedule | None = None) -> JobSummary:
    """Transform every input at the manifest's epoch; one output + sidecar per input."""
    if schedule is None:
        schedule = load_schedule(manifest.schedule_path)
    transform, magnitude = lookup(schedule, manifest.epoch)
    policy = AugPolicy(
        op_set=DEFAULT_OPS,
        n_ops=2,
        magnitude=magnitude,
        magnitude_std=0.5,
        seed=manifest.seed,
    )
    manifest.out_dir.mkdir(parents=True, exist_ok=True)

    def work(task: tuple[int, Path]):
        index, src = task
        out = apply_transform(fio.load_image(src), transform)
        if manifest.apply_augment and magnitude > 0:
            out = randaug(out, policy, index=index)
        stem = f"{index:05d}_{src.stem}"
        if manifest.emit_png:
            dest = manifest.out_dir / f"{stem}.png"
            fio.save_png(dest, out)
        else:
            dest = manifest.out_dir / f"{stem}.etns"
            fio.write_tensor(dest, out.data)
        sidecar = manifest.out_dir / f"{stem}.json"
        sidecar.write_text(
            json.dumps(
                {
                    "source": str(src),
                    "epoch": manifest.epoch,
                    "transform": transform_to_dict(transform),
                    "magnitude": magnitude,
                    "augmented": bool(manifest.apply_augment and magnitude > 0),
                    "seed": manifest.seed,
                    "index": index,
                },
                indent=2,
            )
            + "\n",
            encoding="utf-8",
        )
        return dest

    summary = JobSummary()
    tasks = list(enumerate(manifest.inputs))
    with ThreadPoolExecutor(max_workers=manifest.workers) as pool:
        futures = {pool.submit(work, task): task for task in tasks}
        results: dict[int, Path | None] = {}
        for future, (index, src) in futures.items():
            try:
                results[index] = future.result()
            except (FreqTrainError, OSError) as exc:
                results[index] = None
                summary.errors.append((src, str(exc)))
    summary.outputs = [p for _, p in sorted(results.items()) if p is not None]
    return summary
