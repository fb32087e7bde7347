"""Greedy backward search for per-stage crop bandwidths under an accuracy floor.

Stages are solved from the next-to-last down to the first.  At step ``i``
every stage up to ``i`` is set to a candidate bandwidth (ascending scan)
while later stages keep their solved values; the smallest candidate whose
oracle accuracy clears the floor wins.  The last stage is never searched,
so finished schedules always end at the base resolution.

The accuracy oracle is pluggable: either an external command fed a
schedule-JSON file (or the JSON on stdin) that prints a single decimal in
``[0, 1]``, or an in-memory table keyed by the bandwidth vector.  Results
are memoized by bandwidth vector and optionally persisted to a JSON cache
so a multi-day search can resume.
"""

from __future__ import annotations

import json
import re
import subprocess
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .curriculum import Crop, MagnitudeRule, Schedule, Stage, schedule_to_json
from .errors import ConfigError, ProtocolError

_DECIMAL = re.compile(r"\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+")


@dataclass(frozen=True)
class OracleSpec:
    """How to evaluate a candidate schedule.

    ``command`` mode runs ``argv`` with ``{schedule}`` replaced by the path
    of a schedule-JSON file (the JSON is piped to stdin when no placeholder
    is present); the process must print one decimal in ``[0, 1]`` and exit
    0.  ``table`` mode looks the bandwidth vector up in a dict.
    """

    mode: str
    argv: tuple[str, ...] = ()
    table: dict | None = None
    timeout: float | None = None

    def __post_init__(self):
        if self.mode not in ("command", "table"):
            raise ConfigError(f"oracle mode must be 'command' or 'table', got '{self.mode}'")
        if self.mode == "command" and not self.argv:
            raise ConfigError("command oracle requires a non-empty argv template")
        if self.mode == "table" and self.table is None:
            raise ConfigError("table oracle requires a table")
        object.__setattr__(self, "argv", tuple(self.argv))


@dataclass(frozen=True)
class SearchConfig:
    total_epochs: int
    n_stages: int
    candidates: tuple[int, ...]
    baseline_accuracy: float
    oracle: OracleSpec
    base_resolution: int = 224
    cache_path: Path | None = None
    m0: float = 9.0

    def __post_init__(self):
        object.__setattr__(self, "candidates", tuple(self.candidates))
        if self.n_stages < 1:
            raise ConfigError(f"stage count must be >= 1, got {self.n_stages}")
        if self.total_epochs % self.n_stages:
            raise ConfigError(
                f"total epochs {self.total_epochs} must be divisible by {self.n_stages} stages"
            )
        if not self.candidates:
            raise ConfigError("candidate list must not be empty")
        if list(self.candidates) != sorted(set(self.candidates)):
            raise ConfigError("candidates must be strictly ascending")
        if any(b % 2 or b < 2 for b in self.candidates):
            raise ConfigError("candidates must be positive even bandwidths")
        if self.candidates[-1] != self.base_resolution:
            raise ConfigError(
                f"largest candidate must equal the base resolution {self.base_resolution}"
            )
        if not 0.0 <= self.baseline_accuracy <= 1.0:
            raise ConfigError(f"baseline accuracy must lie in [0, 1], got {self.baseline_accuracy}")


@dataclass(frozen=True)
class TraceEntry:
    stage: int
    candidate: int
    vector: tuple[int, ...]
    accuracy: float
    cached: bool


@dataclass(frozen=True)
class SearchResult:
    bandwidths: tuple[int, ...]
    trace: tuple[TraceEntry, ...]
    infeasible_stages: tuple[int, ...]
    oracle_calls: int
    accuracy: float | None
    feasible: bool | None

    @property
    def infeasible_at_every_stage(self) -> bool:
        return len(self.infeasible_stages) == len(self.bandwidths) - 1 and len(self.bandwidths) > 1


def schedule_for_vector(
    vector: tuple[int, ...], total_epochs: int, base_resolution: int = 224, m0: float = 9.0
) -> Schedule:
    """Equal-length stage schedule cropping at each stage's bandwidth."""
    n = len(vector)
    if total_epochs % n:
        raise ConfigError(f"total epochs {total_epochs} not divisible by {n} stages")
    span = total_epochs // n
    stages = tuple(
        Stage(i * span + 1, (i + 1) * span, Crop(b)) for i, b in enumerate(vector)
    )
    return Schedule(total_epochs, stages, MagnitudeRule(m0=m0, kind="linear"), base_resolution)


def _vector_of(schedule: Schedule) -> tuple[int, ...]:
    bands = []
    for stage in schedule.stages:
        if isinstance(stage.transform, Crop):
            bands.append(stage.transform.B)
        else:
            bands.append(schedule.base_resolution)
    return tuple(bands)


def oracle_invoke(spec: OracleSpec, schedule: Schedule) -> float:
    """Evaluate one schedule; raises :class:`ProtocolError` on any contract breach."""
    if spec.mode == "table":
        key = _vector_of(schedule)
        if key not in spec.table:
            raise ProtocolError(f"table oracle has no entry for {key}")
        return float(spec.table[key])

    payload = schedule_to_json(schedule)
    uses_file = any("{schedule}" in a for a in spec.argv)
    tmp = None
    try:
        if uses_file:
            tmp = tempfile.NamedTemporaryFile(
                "w", suffix=".json", prefix="schedule-", delete=False, encoding="utf-8"
            )
            tmp.write(payload + "\n")
            tmp.close()
            argv = [a.replace("{schedule}", tmp.name) for a in spec.argv]
            stdin = None
        else:
            argv = list(spec.argv)
            stdin = payload
        try:
            proc = subprocess.run(
                argv, input=stdin, capture_output=True, text=True, timeout=spec.timeout
            )
        except subprocess.TimeoutExpired as exc:
            raise ProtocolError(f"oracle timed out after {spec.timeout}s", captured=str(exc)) from exc
        except OSError as exc:
            raise ProtocolError(f"oracle could not be launched: {exc}") from exc
        if proc.returncode != 0:
            raise ProtocolError(
                f"oracle exited with status {proc.returncode}",
                captured=proc.stdout + proc.stderr,
            )
        text = proc.stdout.strip()
        if not _DECIMAL.fullmatch(text):
            raise ProtocolError(
                f"oracle output is not a single decimal: {text!r}", captured=proc.stdout
            )
        value = float(text)
        if not 0.0 <= value <= 1.0:
            raise ProtocolError(f"oracle accuracy {value} outside [0, 1]", captured=proc.stdout)
        return value
    finally:
        if tmp is not None:
            Path(tmp.name).unlink(missing_ok=True)


def _load_cache(path: Path | None) -> dict[tuple[int, ...], float]:
    if path is None or not Path(path).exists():
        return {}
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    return {tuple(int(b) for b in key.split(",")): float(acc) for key, acc in raw.items()}


def _save_cache(path: Path | None, cache: dict[tuple[int, ...], float]):
    if path is None:
        return
    payload = {",".join(str(b) for b in key): acc for key, acc in sorted(cache.items())}
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def greedy_search(config: SearchConfig) -> SearchResult:
    """Solve the per-stage bandwidths by backward greedy minimization.

    Every oracle call lands in the trace; vectors already answered (in this
    run or a loaded cache) are never re-sent.  A stage where no candidate
    clears the floor keeps the base resolution and is reported in
    ``infeasible_stages``.
    """
    n = config.n_stages
    base = config.base_resolution
    cache = _load_cache(config.cache_path)
    solved = [base] * n
    trace: list[TraceEntry] = []
    infeasible: list[int] = []
    calls = 0

    def query(stage: int, candidate: int, vector: tuple[int, ...]) -> float:
        nonlocal calls
        if vector in cache:
            trace.append(TraceEntry(stage, candidate, vector, cache[vector], cached=True))
            return cache[vector]
        acc = oracle_invoke(config.oracle, schedule_for_vector(vector, config.total_epochs, base, config.m0))
        calls += 1
        cache[vector] = acc
        _save_cache(config.cache_path, cache)
        trace.append(TraceEntry(stage, candidate, vector, acc, cached=False))
        return acc

    for i in range(n - 1, 0, -1):  # stage i is 1-based; stage n is never searched
        chosen = None
        for candidate in config.candidates:
            vector = tuple([candidate] * i + solved[i:])
            if query(i, candidate, vector) >= config.baseline_accuracy:
                chosen = candidate
                break
        if chosen is None:
            infeasible.append(i)
        else:
            solved[i - 1] = chosen

    final = tuple(solved)
    accuracy = cache.get(final)
    feasible = None if accuracy is None else accuracy >= config.baseline_accuracy
    return SearchResult(
        bandwidths=final,
        trace=tuple(trace),
        infeasible_stages=tuple(sorted(infeasible)),
        oracle_calls=calls,
        accuracy=accuracy,
        feasible=feasible,
    )
