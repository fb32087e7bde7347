"""Magnitude-parameterized random augmentation with a counter-based stream.

Each op maps the shared magnitude scale ``[0, 30]`` linearly onto its own
parameter, with 0 meaning the identity:

==============  =================================================
brightness      multiply by ``1 +/- 0.9 * m/30``
contrast        scale around the channel mean by ``1 +/- 0.9 * m/30``
rotate          rotate by ``+/- m`` degrees about the centre
shear-x/y       shear factor ``+/- 0.3 * m/30`` about the centre
translate-x/y   shift by ``+/- 0.3 * size * m/30`` pixels
posterize       blend weight ``m/30`` toward an 8-level quantization
==============  =================================================

Geometric ops resample bilinearly with edge clamping and keep the image
size; all op outputs are clamped to ``[0, 1]``.  Randomness comes from a
Philox generator keyed on ``(seed, image_index)``, so results do not
depend on call order or thread schedule.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, RangeError
from .image import ImageTensor

MAX_MAGNITUDE = 30.0

DEFAULT_OPS = (
    "brightness",
    "contrast",
    "rotate",
    "shear-x",
    "shear-y",
    "translate-x",
    "translate-y",
    "posterize",
)


def magnitude_at(t: int, total_epochs: int, m0: float) -> float:
    """Linearly scheduled magnitude ``(t / total_epochs) * m0``, no rounding."""
    if total_epochs < 1:
        raise RangeError(f"total epochs must be >= 1, got {total_epochs}")
    if not 0 <= t <= total_epochs:
        raise RangeError(f"epoch {t} outside [0, {total_epochs}]")
    return (t / total_epochs) * m0


@dataclass(frozen=True)
class AugPolicy:
    """Which ops may fire, how many per image, and how strongly."""

    op_set: tuple[str, ...] = DEFAULT_OPS
    n_ops: int = 2
    magnitude: float = 9.0
    magnitude_std: float = 0.5
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "op_set", tuple(self.op_set))
        if not self.op_set:
            raise ConfigError("op_set must not be empty")
        for name in self.op_set:
            if name not in _OPS:
                raise ConfigError(f"unknown op '{name}'; known ops: {sorted(_OPS)}")
        if self.n_ops < 1:
            raise ConfigError(f"n_ops must be >= 1, got {self.n_ops}")
        if not 0.0 <= self.magnitude <= MAX_MAGNITUDE:
            raise ConfigError(f"magnitude must lie in [0, {MAX_MAGNITUDE}], got {self.magnitude}")
        if self.magnitude_std < 0:
            raise ConfigError(f"magnitude_std must be >= 0, got {self.magnitude_std}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed}")


def _bilinear_gather(arr: np.ndarray, ys: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Sample (C, H, W) data at fractional coordinates with edge clamping."""
    _, h, w = arr.shape
    y0 = np.floor(ys).astype(np.int64)
    x0 = np.floor(xs).astype(np.int64)
    fy = ys - y0
    fx = xs - x0
    y0c = np.clip(y0, 0, h - 1)
    y1c = np.clip(y0 + 1, 0, h - 1)
    x0c = np.clip(x0, 0, w - 1)
    x1c = np.clip(x0 + 1, 0, w - 1)
    top = arr[:, y0c, x0c] * (1 - fx) + arr[:, y0c, x1c] * fx
    bot = arr[:, y1c, x0c] * (1 - fx) + arr[:, y1c, x1c] * fx
    return top * (1 - fy) + bot * fy


def _affine(arr: np.ndarray, src_of_yx) -> np.ndarray:
    _, h, w = arr.shape
    yy, xx = np.meshgrid(np.arange(h, dtype=np.float64), np.arange(w, dtype=np.float64), indexing="ij")
    ys, xs = src_of_yx(yy, xx)
    return _bilinear_gather(arr, ys, xs)


def _rotate(arr, level, sign):
    theta = np.deg2rad(sign * level)
    _, h, w = arr.shape
    cy, cx = (h - 1) / 2.0, (w - 1) / 2.0
    cos, sin = np.cos(theta), np.sin(theta)

    def src(yy, xx):
        dy, dx = yy - cy, xx - cx
        return cy + cos * dy - sin * dx, cx + sin * dy + cos * dx

    return _affine(arr, src)


def _shear_x(arr, level, sign):
    lam = sign * 0.3 * level / MAX_MAGNITUDE
    cy = (arr.shape[1] - 1) / 2.0
    return _affine(arr, lambda yy, xx: (yy, xx + lam * (yy - cy)))


def _shear_y(arr, level, sign):
    lam = sign * 0.3 * level / MAX_MAGNITUDE
    cx = (arr.shape[2] - 1) / 2.0
    return _affine(arr, lambda yy, xx: (yy + lam * (xx - cx), xx))


def _translate_x(arr, level, sign):
    dx = sign * 0.3 * arr.shape[2] * level / MAX_MAGNITUDE
    return _affine(arr, lambda yy, xx: (yy, xx - dx))


def _translate_y(arr, level, sign):
    dy = sign * 0.3 * arr.shape[1] * level / MAX_MAGNITUDE
    return _affine(arr, lambda yy, xx: (yy - dy, xx))


def _brightness(arr, level, sign):
    return arr * (1.0 + sign * 0.9 * level / MAX_MAGNITUDE)


def _contrast(arr, level, sign):
    factor = 1.0 + sign * 0.9 * level / MAX_MAGNITUDE
    means = arr.mean(axis=(1, 2), keepdims=True)
    return means + factor * (arr - means)


def _posterize(arr, level, sign):
    levels = 8.0
    quantized = np.minimum(np.floor(arr * levels), levels - 1) / (levels - 1)
    weight = level / MAX_MAGNITUDE
    return arr + weight * (quantized - arr)


# name -> (signed?, fn)
_OPS = {
    "brightness": (True, _brightness),
    "contrast": (True, _contrast),
    "rotate": (True, _rotate),
    "shear-x": (True, _shear_x),
    "shear-y": (True, _shear_y),
    "translate-x": (True, _translate_x),
    "translate-y": (True, _translate_y),
    "posterize": (False, _posterize),
}


def apply_op(image: ImageTensor, name: str, level: float, sign: float = 1.0) -> ImageTensor:
    """Apply one op at the given level.  Level 0 returns the input unchanged."""
    if name not in _OPS:
        raise ConfigError(f"unknown op '{name}'; known ops: {sorted(_OPS)}")
    if not 0.0 <= level <= MAX_MAGNITUDE:
        raise ConfigError(f"level must lie in [0, {MAX_MAGNITUDE}], got {level}")
    if level == 0.0:
        return image
    _, fn = _OPS[name]
    return ImageTensor(np.clip(fn(image.data, level, sign), 0.0, 1.0))


def _stream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((seed, index))))


def randaug(image: ImageTensor, policy: AugPolicy, index: int = 0) -> ImageTensor:
    """Apply ``n_ops`` random ops drawn with replacement from the policy's op set.

    Per-op strength is ``magnitude + N(0, magnitude_std)`` clamped to the
    magnitude range.  The draw stream is a pure function of
    ``(policy.seed, index)``, so identical inputs give bit-identical
    outputs regardless of batching or thread order.  Magnitude 0 is the
    identity by contract.
    """
    if index < 0:
        raise RangeError(f"image index must be >= 0, got {index}")
    if policy.magnitude == 0.0:
        return image
    rng = _stream(policy.seed, index)
    out = image
    for _ in range(policy.n_ops):
        name = policy.op_set[int(rng.integers(len(policy.op_set)))]
        level = float(np.clip(policy.magnitude + rng.normal(0.0, policy.magnitude_std), 0.0, MAX_MAGNITUDE))
        signed, _fn = _OPS[name]
        sign = (1.0 if rng.random() < 0.5 else -1.0) if signed else 1.0
        out = apply_op(out, name, level, sign)
    return out
