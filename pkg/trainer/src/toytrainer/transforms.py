"""Batched in-process input transforms mirroring the main toolkit.

Same conventions as the library the schedules come from: centered spectra
(shift, FFT, shift back), area-rescaled centre crops with zeroed Nyquist
lines, inclusive circular masks.  Cross-checked against the toolkit's CLI
in the test suite, pixel tolerance 1e-6.

All functions take and return float arrays shaped (N, C, H, W).
"""

from __future__ import annotations

import numpy as np

AXES = (-2, -1)


def _fft(x):
    return np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(x, axes=AXES), axes=AXES), axes=AXES)


def _ifft(spec):
    return np.fft.fftshift(np.fft.ifft2(np.fft.ifftshift(spec, axes=AXES), axes=AXES), axes=AXES).real


def crop_batch(x: np.ndarray, bandwidth: int) -> np.ndarray:
    h, w = x.shape[-2:]
    if bandwidth == h == w:
        return x
    if bandwidth > min(h, w) or bandwidth % 2:
        raise ValueError(f"bad crop bandwidth {bandwidth} for {h}x{w}")
    spec = _fft(x)
    r0 = h // 2 - bandwidth // 2
    c0 = w // 2 - bandwidth // 2
    window = spec[..., r0:r0 + bandwidth, c0:c0 + bandwidth] * (bandwidth * bandwidth / (h * w))
    window[..., 0, :] = 0.0
    window[..., :, 0] = 0.0
    return _ifft(window)


def _mask(h: int, w: int, radius: float) -> np.ndarray:
    u = (np.arange(h) - h // 2)[:, None]
    v = (np.arange(w) - w // 2)[None, :]
    return np.hypot(u, v) <= radius


def lowpass_batch(x: np.ndarray, radius: float) -> np.ndarray:
    return _ifft(_fft(x) * _mask(*x.shape[-2:], radius))


def highpass_batch(x: np.ndarray, radius: float) -> np.ndarray:
    return _ifft(_fft(x) * ~_mask(*x.shape[-2:], radius))


def downsample_mean_batch(x: np.ndarray, k: int) -> np.ndarray:
    n, c, h, w = x.shape
    if h % k or w % k:
        raise ValueError(f"factor {k} does not divide {h}x{w}")
    return x.reshape(n, c, h // k, k, w // k, k).mean(axis=(3, 5))


def apply_transform_batch(x: np.ndarray, transform: dict) -> np.ndarray:
    kind = transform["kind"]
    if kind == "identity":
        return x
    if kind == "crop":
        return crop_batch(x, int(transform["B"]))
    if kind == "lowpass":
        return lowpass_batch(x, float(transform["r"]))
    if kind == "highpass":
        return highpass_batch(x, float(transform["r"]))
    if kind == "downsample":
        if transform.get("kernel", "mean") != "mean":
            raise ValueError("the trainer only mirrors the mean down-sampling kernel")
        return downsample_mean_batch(x, int(transform["k"]))
    raise ValueError(f"unknown transform kind {kind!r}")


def restandardize_batch(x: np.ndarray, target_std: float) -> np.ndarray:
    """Re-centre at 0.5 and rescale each sample to a reference contrast.

    Band-filtered images keep only a fraction of the pixel variance; this
    puts them back on the scale the model was trained at so filtered-set
    evaluations measure information content rather than global gain.
    """
    centered = x - x.mean(axis=(2, 3), keepdims=True)
    stds = centered.std(axis=(2, 3), keepdims=True).mean(axis=1, keepdims=True)
    return 0.5 + centered * (target_std / np.maximum(stds, 1e-9))


def transform_label(transform: dict, base: int) -> float:
    """The 'B or r in effect' column for the metrics log."""
    kind = transform["kind"]
    if kind == "crop":
        return float(transform["B"])
    if kind in ("lowpass", "highpass"):
        return float(transform["r"])
    if kind == "downsample":
        return float(base // int(transform["k"]))
    return float(base)
