"""Schedule-JSON handling on the trainer side.

The trainer talks to the main toolkit only through its file formats, so
this module parses and validates the same schedule schema independently:
contiguous 1-based stages covering [1, T], final stage the identity at the
base resolution, canonical field names, unknown fields rejected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path


class ScheduleError(ValueError):
    pass


_TRANSFORM_FIELDS = {
    "identity": set(),
    "crop": {"B"},
    "lowpass": {"r"},
    "highpass": {"r"},
    "downsample": {"k", "kernel"},
}


@dataclass(frozen=True)
class Stage:
    start: int
    end: int
    transform: dict


@dataclass(frozen=True)
class Schedule:
    total_epochs: int
    stages: tuple[Stage, ...]
    m0: float
    magnitude_kind: str
    magnitude_value: float | None
    base_resolution: int

    def lookup(self, t: int) -> tuple[dict, float]:
        if not 1 <= t <= self.total_epochs:
            raise ScheduleError(f"epoch {t} outside [1, {self.total_epochs}]")
        if self.magnitude_kind == "constant":
            m = float(self.magnitude_value)
        else:
            m = (t / self.total_epochs) * self.m0
        for stage in self.stages:
            if stage.start <= t <= stage.end:
                return stage.transform, m
        raise ScheduleError(f"no stage covers epoch {t}")


def _check_fields(obj: dict, allowed: set, where: str):
    unknown = set(obj) - allowed
    if unknown:
        raise ScheduleError(f"unknown fields {sorted(unknown)} in {where}")


def _validate_transform(obj: dict) -> dict:
    kind = obj.get("kind")
    if kind not in _TRANSFORM_FIELDS:
        raise ScheduleError(f"unknown transform kind {kind!r}")
    _check_fields(obj, _TRANSFORM_FIELDS[kind] | {"kind"}, f"transform {kind!r}")
    if kind == "crop" and (int(obj["B"]) < 2 or int(obj["B"]) % 2):
        raise ScheduleError(f"crop bandwidth must be positive and even, got {obj['B']}")
    if kind in ("lowpass", "highpass") and float(obj["r"]) < 0:
        raise ScheduleError("filter radius must be >= 0")
    return dict(obj)


def _is_identity_at_base(transform: dict, base: int) -> bool:
    if transform["kind"] == "identity":
        return True
    return transform["kind"] == "crop" and int(transform["B"]) == base


def parse_schedule(obj: dict) -> Schedule:
    if not isinstance(obj, dict):
        raise ScheduleError("schedule JSON must be an object")
    _check_fields(obj, {"total_epochs", "base_resolution", "stages", "magnitude"}, "schedule")
    for key in ("total_epochs", "stages", "magnitude"):
        if key not in obj:
            raise ScheduleError(f"schedule JSON missing {key!r}")
    total = int(obj["total_epochs"])
    base = int(obj.get("base_resolution", 224))
    mag = obj["magnitude"]
    _check_fields(mag, {"m0", "kind", "value"}, "magnitude rule")
    kind = mag.get("kind", "linear")
    if kind not in ("linear", "constant"):
        raise ScheduleError(f"unknown magnitude kind {kind!r}")
    if kind == "constant" and "value" not in mag:
        raise ScheduleError("constant magnitude rule requires a value")
    stages = []
    cursor = 1
    for raw in obj["stages"]:
        _check_fields(raw, {"start", "end", "transform"}, "stage")
        start, end = int(raw["start"]), int(raw["end"])
        if start != cursor or end < start:
            raise ScheduleError(f"stages must be contiguous from 1; got {start}..{end} at {cursor}")
        stages.append(Stage(start, end, _validate_transform(raw["transform"])))
        cursor = end + 1
    if not stages or cursor != total + 1:
        raise ScheduleError(f"stages must cover [1, {total}]")
    if not _is_identity_at_base(stages[-1].transform, base):
        raise ScheduleError("final stage must be the identity at the base resolution")
    return Schedule(
        total_epochs=total,
        stages=tuple(stages),
        m0=float(mag.get("m0", 9.0)),
        magnitude_kind=kind,
        magnitude_value=float(mag["value"]) if "value" in mag else None,
        base_resolution=base,
    )


def load_schedule(path: str | Path) -> Schedule:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ScheduleError(f"{path}: not valid JSON: {exc}") from exc
    return parse_schedule(obj)


def _scale_even(b: int, base: int, reference_base: int = 224) -> int:
    scaled = b * base / reference_base
    return int(round(scaled / 2) * 2)


def scaled_schedule_dict(total_epochs: int, base: int = 64) -> dict:
    """The three-stage curriculum rescaled to a small base resolution.

    Stage boundaries sit at 60% / 80% (half-up rounding) like the full-size
    version; bandwidths are the 160/192/224 reference values scaled by
    ``base/224`` and rounded to even.
    """
    if total_epochs < 1:
        raise ScheduleError(f"total epochs must be >= 1, got {total_epochs}")
    b1 = (6 * total_epochs + 5) // 10
    b2 = (8 * total_epochs + 5) // 10
    b2 = min(b2, total_epochs - 1)
    b1 = min(b1, b2)
    bands = [_scale_even(b, base) for b in (160, 192)] + [base]
    bounds = (b1, b2, total_epochs)
    stages = []
    start = 1
    for band, end in zip(bands, bounds):
        if end >= start:
            stages.append({"start": start, "end": end, "transform": {"kind": "crop", "B": band}})
            start = end + 1
    return {
        "total_epochs": total_epochs,
        "base_resolution": base,
        "stages": stages,
        "magnitude": {"m0": 9.0, "kind": "linear"},
    }


def identity_schedule_dict(total_epochs: int, base: int = 64) -> dict:
    return {
        "total_epochs": total_epochs,
        "base_resolution": base,
        "stages": [{"start": 1, "end": total_epochs, "transform": {"kind": "identity"}}],
        "magnitude": {"m0": 9.0, "kind": "linear"},
    }


def save_schedule_dict(obj: dict, path: str | Path):
    Path(path).write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")
