"""Dataset handling: standard CIFAR-10 binary batches, plus a synthetic
generator that writes the same format.

The generator builds 10 classes whose identity is carried in two separate
frequency bands: a smooth per-class pattern (spectrum inside ~3 cycles)
and a per-class oriented grating (8-11 cycles, random phase per sample).
Both bands are discriminative on their own, so low-pass-only and
high-pass-only versions of the validation set are each solvable; samples
add amplitude jitter, random cyclic shifts and pixel noise.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import torch

RECORD_BYTES = 1 + 3 * 32 * 32
N_CLASSES = 10


class DatasetError(RuntimeError):
    pass


def _low_templates(rng: np.random.Generator) -> np.ndarray:
    """Per-class smooth patterns with spectra inside radius ~2.8."""
    out = np.zeros((N_CLASSES, 32, 32))
    for c in range(N_CLASSES):
        spec = np.zeros((32, 32), dtype=complex)
        for u in range(-2, 3):
            for v in range(-2, 3):
                if u == 0 and v == 0:
                    continue
                coeff = rng.normal() + 1j * rng.normal()
                spec[(u + 16), (v + 16)] = coeff
        spec = spec + np.conj(spec[::-1, ::-1])  # make it invert to a real pattern
        pattern = np.fft.ifft2(np.fft.ifftshift(spec)).real
        out[c] = pattern / pattern.std()
    return out


def _freq(angle: float, rho: float) -> tuple[int, int]:
    fx = int(np.clip(round(rho * np.cos(angle)), -11, 11))
    fy = int(np.clip(round(rho * np.sin(angle)), -11, 11))
    if fx == 0 and fy == 0:
        fx = 8
    return fx, fy


def _member_gratings() -> list[tuple[int, int]]:
    """Two well-separated orientations distinguishing members within a pair."""
    return [_freq(0.35, 9.0), _freq(0.35 + np.pi / 2, 9.0)]


def _pair_gratings() -> list[tuple[int, int]]:
    """Five closer orientations carrying the (harder) pair identity."""
    return [_freq(0.12 + np.pi * (p + 0.5) / 5, 8.0 + (p % 3)) for p in range(5)]


def _color_tints(rng: np.random.Generator) -> np.ndarray:
    """Per-class channel weighting for the smooth band, zero on average."""
    tints = rng.normal(size=(N_CLASSES, 3))
    tints -= tints.mean(axis=1, keepdims=True)
    tints /= np.abs(tints).max(axis=1, keepdims=True)
    return tints


def _smooth_noise(rng: np.random.Generator, sigma: float, radius: float = 8.0) -> np.ndarray:
    """Per-channel noise whose spectrum lives inside the given radius."""
    white = rng.normal(size=(3, 32, 32))
    spec = np.fft.fftshift(np.fft.fft2(white, axes=(-2, -1)), axes=(-2, -1))
    u = (np.arange(32) - 16)[:, None]
    v = (np.arange(32) - 16)[None, :]
    mask = np.hypot(u, v) <= radius
    shaped = np.fft.ifft2(np.fft.ifftshift(spec * mask, axes=(-2, -1)), axes=(-2, -1)).real
    scale = np.sqrt(mask.mean())
    return sigma * shaped / scale


def synthesize(
    n: int,
    seed: int,
    texture_strength: float = 0.7,
    noise_std: float = 0.05,
    low_noise_std: float = 0.2,
) -> tuple[np.ndarray, np.ndarray]:
    """Images (n, 3, 32, 32) uint8 and labels (n,) uint8.

    Class identity is split across the two bands.  The smooth band
    carries most of the energy plus a color tint and identifies the
    class *pair* (with a weak member-specific component); the texture
    band carries a strong member grating and a weak pair grating, so it
    resolves the member quickly but the pair only slowly.  Each band
    alone is informative, neither is sufficient, and the coarse band
    has the better signal-to-noise ratio (most pixel noise is shaped
    into it, as in natural low-frequency-dominated spectra).
    """
    rng = np.random.default_rng(seed)
    templates = _low_templates(np.random.default_rng(1234))  # class definitions are fixed
    member_freqs = _member_gratings()
    pair_freqs = _pair_gratings()
    tints = _color_tints(np.random.default_rng(1234))
    ys, xs = np.mgrid[0:32, 0:32]
    labels = rng.integers(0, N_CLASSES, size=n).astype(np.uint8)
    images = np.empty((n, 3, 32, 32), dtype=np.uint8)
    member = _low_templates(np.random.default_rng(4321))  # member-specific layouts
    for i in range(n):
        c = int(labels[i])
        pair = c // 2
        j = c % 2
        a = 0.85 + 0.3 * rng.random()
        b = (0.85 + 0.3 * rng.random()) * texture_strength
        smooth = np.roll(
            templates[2 * pair], (int(rng.integers(-2, 3)), int(rng.integers(-2, 3))), axis=(0, 1)
        )
        smooth = smooth + 0.25 * np.roll(
            member[c], (int(rng.integers(-2, 3)), int(rng.integers(-2, 3))), axis=(0, 1)
        )
        other = int((c + 1 + rng.integers(0, N_CLASSES - 1)) % N_CLASSES)
        smooth = smooth + 0.4 * np.roll(
            templates[2 * (other // 2)], (int(rng.integers(-8, 9)), int(rng.integers(-8, 9))), axis=(0, 1)
        )
        (mx, my) = member_freqs[j]
        (px, py) = pair_freqs[pair]
        texture = np.cos(2 * np.pi * (mx * xs + my * ys) / 32 + rng.uniform(0, 2 * np.pi))
        texture = texture + 0.7 * np.cos(2 * np.pi * (px * xs + py * ys) / 32 + rng.uniform(0, 2 * np.pi))
        psi = rng.uniform(0, np.pi)
        rho = rng.uniform(7.0, 11.0)
        dx, dy = rho * np.cos(psi), rho * np.sin(psi)
        distractor = np.cos(2 * np.pi * (dx * xs + dy * ys) / 32 + rng.uniform(0, 2 * np.pi))
        chan_low = 1.0 + 0.6 * tints[2 * pair][:, None, None]  # color identifies the pair
        low = a * smooth[None, :, :] * chan_low
        high = (b * texture + 0.3 * b * distractor)[None, :, :]
        noise = rng.normal(0, noise_std, (3, 32, 32)) + _smooth_noise(rng, low_noise_std)
        pixels = 0.5 + 0.2 * (low + high) + noise
        images[i] = np.clip(pixels * 255, 0, 255).astype(np.uint8)
    return images, labels


def write_cifar_batches(out_dir: str | Path, n_train: int = 3000, n_test: int = 1000, seed: int = 0):
    """Write synthetic data as standard CIFAR-10 binary batch files."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, count, offset in (("data_batch_1.bin", n_train, 0), ("test_batch.bin", n_test, 1)):
        images, labels = synthesize(count, seed=seed + offset)
        blob = bytearray()
        for i in range(count):
            blob.append(int(labels[i]))
            blob.extend(images[i].tobytes())  # planes already R, G, B row-major
        (out_dir / name).write_bytes(bytes(blob))


def _read_batch(path: Path) -> tuple[np.ndarray, np.ndarray]:
    blob = path.read_bytes()
    if len(blob) % RECORD_BYTES:
        raise DatasetError(f"{path}: size {len(blob)} is not a whole number of CIFAR records")
    n = len(blob) // RECORD_BYTES
    raw = np.frombuffer(blob, dtype=np.uint8).reshape(n, RECORD_BYTES)
    labels = raw[:, 0].copy()
    images = raw[:, 1:].reshape(n, 3, 32, 32).copy()
    return images, labels


def load_cifar_dir(data_dir: str | Path) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Read every training batch plus the test batch from a directory."""
    data_dir = Path(data_dir)
    train_files = sorted(data_dir.glob("data_batch_*.bin"))
    test_file = data_dir / "test_batch.bin"
    if not train_files or not test_file.exists():
        raise DatasetError(
            f"dataset not found under {data_dir}: expected data_batch_*.bin and test_batch.bin"
        )
    train = [_read_batch(p) for p in train_files]
    train_x = np.concatenate([t[0] for t in train])
    train_y = np.concatenate([t[1] for t in train])
    test_x, test_y = _read_batch(test_file)
    return train_x, train_y, test_x, test_y


def upsample_to_64(images_u8: np.ndarray) -> np.ndarray:
    """Bilinear 2x up-sampling to float32 (N, 3, 64, 64) in [0, 1]."""
    x = torch.from_numpy(images_u8.astype(np.float32) / 255.0)
    up = torch.nn.functional.interpolate(x, scale_factor=2, mode="bilinear", align_corners=False)
    return up.numpy()
