"""Epoch-indexed curricula: the schedule data model, the standard three-stage
EfficientTrain schedule with epoch scaling, per-epoch lookup, and the
quadratic input-size training-cost model.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from .augment import magnitude_at
from .errors import ConfigError, RangeError
from .resample import KERNEL_NAMES


@dataclass(frozen=True)
class Identity:
    kind = "identity"


@dataclass(frozen=True)
class Crop:
    """Low-frequency crop to a ``B x B`` spectrum window."""

    B: int
    kind = "crop"

    def __post_init__(self):
        if self.B < 2 or self.B % 2:
            raise ConfigError(f"crop bandwidth must be positive and even, got {self.B}")


@dataclass(frozen=True)
class LowPass:
    r: float
    kind = "lowpass"

    def __post_init__(self):
        if self.r < 0:
            raise ConfigError(f"filter radius must be >= 0, got {self.r}")


@dataclass(frozen=True)
class HighPass:
    r: float
    kind = "highpass"

    def __post_init__(self):
        if self.r < 0:
            raise ConfigError(f"filter radius must be >= 0, got {self.r}")


@dataclass(frozen=True)
class Downsample:
    k: int
    kernel: str = "mean"
    kind = "downsample"

    def __post_init__(self):
        if self.k < 1:
            raise ConfigError(f"down-sampling ratio must be >= 1, got {self.k}")
        if self.kernel not in KERNEL_NAMES:
            raise ConfigError(f"unknown kernel '{self.kernel}'; expected one of {KERNEL_NAMES}")


TransformSpec = Union[Identity, Crop, LowPass, HighPass, Downsample]


@dataclass(frozen=True)
class MagnitudeRule:
    """Augmentation-magnitude rule: linear ramp ``(t/T)*m0`` or a constant."""

    m0: float = 9.0
    kind: str = "linear"
    value: float | None = None

    def __post_init__(self):
        if self.kind not in ("linear", "constant"):
            raise ConfigError(f"magnitude kind must be 'linear' or 'constant', got '{self.kind}'")
        if self.kind == "constant" and self.value is None:
            raise ConfigError("constant magnitude rule requires a value")

    def at(self, t: int, total_epochs: int) -> float:
        if self.kind == "constant":
            return float(self.value)
        return magnitude_at(t, total_epochs, self.m0)


@dataclass(frozen=True)
class Stage:
    """Inclusive 1-based epoch span bound to one transform."""

    start: int
    end: int
    transform: TransformSpec

    def __post_init__(self):
        if self.start < 1 or self.end < self.start:
            raise ConfigError(f"invalid stage span {self.start}..{self.end}")

    @property
    def length(self) -> int:
        return self.end - self.start + 1


def _is_identity_at_base(transform: TransformSpec, base_resolution: int) -> bool:
    if isinstance(transform, Identity):
        return True
    return isinstance(transform, Crop) and transform.B == base_resolution


@dataclass(frozen=True)
class Schedule:
    """An ordered, gap-free cover of ``[1, T]`` by stages, plus a magnitude rule.

    The final stage must leave inputs untouched (Identity, or a crop at
    the base resolution), so the last epochs always train on full inputs.
    """

    total_epochs: int
    stages: tuple[Stage, ...]
    magnitude: MagnitudeRule = MagnitudeRule()
    base_resolution: int = 224

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        if self.total_epochs < 1:
            raise ConfigError(f"total epochs must be >= 1, got {self.total_epochs}")
        if self.base_resolution < 2 or self.base_resolution % 2:
            raise ConfigError(f"base resolution must be even, got {self.base_resolution}")
        if not self.stages:
            raise ConfigError("schedule has no stages")
        if self.stages[0].start != 1:
            raise ConfigError(f"first stage starts at {self.stages[0].start}, expected 1")
        for prev, cur in zip(self.stages, self.stages[1:]):
            if cur.start != prev.end + 1:
                raise ConfigError(
                    f"stages must be contiguous: {prev.start}..{prev.end} then {cur.start}..{cur.end}"
                )
        if self.stages[-1].end != self.total_epochs:
            raise ConfigError(
                f"stages end at {self.stages[-1].end} but schedule has {self.total_epochs} epochs"
            )
        if not _is_identity_at_base(self.stages[-1].transform, self.base_resolution):
            raise ConfigError("final stage must apply the identity at the base resolution")


def efficienttrain_schedule(total_epochs: int, base_resolution: int = 224) -> Schedule:
    """The standard three-stage curriculum, rescaled to any epoch budget.

    Boundaries sit at 60% and 80% of training (half-up rounding), with crop
    bandwidths 160 / 192 / 224 and a linear magnitude ramp to 9.  Stages
    that round to zero length are dropped; the final full-resolution stage
    always keeps at least one epoch.
    """
    if total_epochs < 1:
        raise ConfigError(f"total epochs must be >= 1, got {total_epochs}")
    b1 = (6 * total_epochs + 5) // 10
    b2 = (8 * total_epochs + 5) // 10
    b2 = min(b2, total_epochs - 1)
    b1 = min(b1, b2)
    bands = (160, 192, 224)
    bounds = (b1, b2, total_epochs)
    stages = []
    start = 1
    for band, end in zip(bands, bounds):
        if end >= start:
            stages.append(Stage(start, end, Crop(band)))
            start = end + 1
    return Schedule(total_epochs, tuple(stages), MagnitudeRule(m0=9.0, kind="linear"), base_resolution)


def lookup(schedule: Schedule, t: int) -> tuple[TransformSpec, float]:
    """Transform and augmentation magnitude in effect at epoch ``t`` (1-based)."""
    if not 1 <= t <= schedule.total_epochs:
        raise RangeError(f"epoch {t} outside [1, {schedule.total_epochs}]")
    for stage in schedule.stages:
        if stage.start <= t <= stage.end:
            return stage.transform, schedule.magnitude.at(t, schedule.total_epochs)
    raise ConfigError(f"no stage covers epoch {t}")  # unreachable on a valid schedule


def _cost_factor(transform: TransformSpec, base_resolution: int) -> float:
    if isinstance(transform, Crop):
        return (transform.B / base_resolution) ** 2
    if isinstance(transform, Downsample):
        return 1.0 / transform.k ** 2
    # identity and filter transforms keep the input size
    return 1.0


def relative_cost(schedule: Schedule) -> tuple[float, float]:
    """Relative training cost under the quadratic input-size model, and its speedup.

    ``cost = sum_stages (duration/T) * (B/base)^2``; filters cost 1 because
    they keep the input size.  Exact for compute that scales with pixel
    count; returns ``(cost, 1/cost)``.
    """
    cost = sum(
        (stage.length / schedule.total_epochs) * _cost_factor(stage.transform, schedule.base_resolution)
        for stage in schedule.stages
    )
    return cost, 1.0 / cost


# ---------------------------------------------------------------------------
# JSON wire format (canonical field order, unknown fields rejected)

def transform_to_dict(transform: TransformSpec) -> dict:
    if isinstance(transform, Identity):
        return {"kind": "identity"}
    if isinstance(transform, Crop):
        return {"kind": "crop", "B": transform.B}
    if isinstance(transform, LowPass):
        return {"kind": "lowpass", "r": transform.r}
    if isinstance(transform, HighPass):
        return {"kind": "highpass", "r": transform.r}
    if isinstance(transform, Downsample):
        return {"kind": "downsample", "k": transform.k, "kernel": transform.kernel}
    raise ConfigError(f"unknown transform {transform!r}")


_TRANSFORM_FIELDS = {
    "identity": set(),
    "crop": {"B"},
    "lowpass": {"r"},
    "highpass": {"r"},
    "downsample": {"k", "kernel"},
}


def _reject_unknown(obj: dict, allowed: set[str], where: str):
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"unknown fields {sorted(unknown)} in {where}")


def transform_from_dict(obj: dict) -> TransformSpec:
    if "kind" not in obj:
        raise ConfigError("transform object missing 'kind'")
    kind = obj["kind"]
    if kind not in _TRANSFORM_FIELDS:
        raise ConfigError(f"unknown transform kind '{kind}'")
    _reject_unknown(obj, _TRANSFORM_FIELDS[kind] | {"kind"}, f"transform '{kind}'")
    if kind == "identity":
        return Identity()
    if kind == "crop":
        return Crop(int(obj["B"]))
    if kind == "lowpass":
        return LowPass(float(obj["r"]))
    if kind == "highpass":
        return HighPass(float(obj["r"]))
    return Downsample(int(obj["k"]), str(obj.get("kernel", "mean")))


def schedule_to_dict(schedule: Schedule) -> dict:
    magnitude = {"m0": schedule.magnitude.m0, "kind": schedule.magnitude.kind}
    if schedule.magnitude.kind == "constant":
        magnitude["value"] = schedule.magnitude.value
    return {
        "total_epochs": schedule.total_epochs,
        "base_resolution": schedule.base_resolution,
        "stages": [
            {"start": s.start, "end": s.end, "transform": transform_to_dict(s.transform)}
            for s in schedule.stages
        ],
        "magnitude": magnitude,
    }


def schedule_from_dict(obj: dict) -> Schedule:
    if not isinstance(obj, dict):
        raise ConfigError("schedule JSON must be an object")
    _reject_unknown(obj, {"total_epochs", "base_resolution", "stages", "magnitude"}, "schedule")
    for key in ("total_epochs", "stages", "magnitude"):
        if key not in obj:
            raise ConfigError(f"schedule JSON missing '{key}'")
    mag_obj = obj["magnitude"]
    _reject_unknown(mag_obj, {"m0", "kind", "value"}, "magnitude rule")
    magnitude = MagnitudeRule(
        m0=float(mag_obj.get("m0", 9.0)),
        kind=str(mag_obj.get("kind", "linear")),
        value=float(mag_obj["value"]) if "value" in mag_obj else None,
    )
    stages = []
    for raw in obj["stages"]:
        _reject_unknown(raw, {"start", "end", "transform"}, "stage")
        stages.append(Stage(int(raw["start"]), int(raw["end"]), transform_from_dict(raw["transform"])))
    return Schedule(
        total_epochs=int(obj["total_epochs"]),
        stages=tuple(stages),
        magnitude=magnitude,
        base_resolution=int(obj.get("base_resolution", 224)),
    )


def schedule_to_json(schedule: Schedule, indent: int | None = 2) -> str:
    return json.dumps(schedule_to_dict(schedule), indent=indent)


def save_schedule(schedule: Schedule, path: str | Path):
    Path(path).write_text(schedule_to_json(schedule) + "\n", encoding="utf-8")


def load_schedule(path: str | Path) -> Schedule:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"schedule file {path} is not valid JSON: {exc}") from exc
    return schedule_from_dict(obj)
