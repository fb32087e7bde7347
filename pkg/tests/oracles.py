"""Independent reference implementations used as test oracles.

Everything here is deliberately written from the definitions (double sums,
explicit loops, direct enumeration) rather than reusing library code, so
the fast paths are checked against a second derivation.
"""

import numpy as np


def dft2_reference(arr: np.ndarray) -> np.ndarray:
    """Direct double-sum DFT over signed pixel/frequency coordinates."""
    h, w = arr.shape
    xs = (np.arange(h) - h // 2)[:, None]
    ys = (np.arange(w) - w // 2)[None, :]
    out = np.empty((h, w), dtype=np.complex128)
    for a, u in enumerate(np.arange(h) - h // 2):
        for b, v in enumerate(np.arange(w) - w // 2):
            phase = np.exp(-2j * np.pi * (u * xs / h + v * ys / w))
            out[a, b] = np.sum(arr * phase)
    return out


def idft2_reference(spec: np.ndarray) -> np.ndarray:
    """Direct double-sum inverse DFT, normalized by 1/(H*W)."""
    h, w = spec.shape
    us = (np.arange(h) - h // 2)[:, None]
    vs = (np.arange(w) - w // 2)[None, :]
    out = np.empty((h, w), dtype=np.complex128)
    for a, x in enumerate(np.arange(h) - h // 2):
        for b, y in enumerate(np.arange(w) - w // 2):
            phase = np.exp(2j * np.pi * (us * x / h + vs * y / w))
            out[a, b] = np.sum(spec * phase) / (h * w)
    return out


def crop_reference(spec: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Centre crop with area rescaling and Nyquist-line zeroing."""
    h, w = spec.shape
    r0 = h // 2 - out_h // 2
    c0 = w // 2 - out_w // 2
    out = spec[r0:r0 + out_h, c0:c0 + out_w] * (out_h * out_w / (h * w))
    if out_h < h:
        out[0, :] = 0.0
    if out_w < w:
        out[:, 0] = 0.0
    return out


def downsample_reference(arr: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Plain-loop kernel aggregation (real or complex input)."""
    k = weights.shape[0]
    h, w = arr.shape
    out = np.zeros((h // k, w // k), dtype=np.result_type(arr.dtype, np.float64))
    for i in range(h // k):
        for j in range(w // k):
            acc = 0.0
            for s in range(k):
                for t in range(k):
                    acc = acc + weights[s, t] * arr[k * i + s, k * j + t]
            out[i, j] = acc
    return out


def fold_reference(u: int, size: int, k: int) -> int:
    half = size // (2 * k)
    return (u + half) % (size // k) - half


def alias_set_reference(u: int, v: int, height: int, width: int, k: int) -> set:
    """Brute-force scan of every input bin against the stride rule."""
    members = set()
    for u2 in range(-height // 2, height // 2):
        for v2 in range(-width // 2, width // 2):
            if (u2 - u) % (height // k) == 0 and (v2 - v) % (width // k) == 0:
                members.add((u2, v2))
    return members


def probe_alpha_reference(u2: int, v2: int, weights: np.ndarray, height: int, width: int):
    """Measure one dependency coefficient with a fully independent pipeline.

    Complex-exponential probe -> loop downsample -> double-sum DFT; returns
    the folded output bin and the measured coefficient.
    """
    k = weights.shape[0]
    xs = (np.arange(height) - height // 2)[:, None]
    ys = (np.arange(width) - width // 2)[None, :]
    probe = np.exp(2j * np.pi * (u2 * xs / height + v2 * ys / width))
    out = downsample_reference(probe, weights)
    spec = dft2_reference(out)
    u = fold_reference(u2, height, k)
    v = fold_reference(v2, width, k)
    coeff = spec[u + height // (2 * k), v + width // (2 * k)]
    return (u, v), coeff / (height * width)


def greedy_reference(candidates, n_stages, a0, table, base):
    """Step-by-step re-execution of the backward greedy minimization."""
    solved = [base] * n_stages
    for i in range(n_stages - 1, 0, -1):
        feasible = [
            b for b in candidates if table[tuple([b] * i + solved[i:])] >= a0
        ]
        if feasible:
            solved[i - 1] = min(feasible)
    return tuple(solved)
