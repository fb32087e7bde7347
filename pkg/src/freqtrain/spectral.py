"""Centered 2D DFT, circular filtering, and low-frequency spectrum cropping.

Conventions
-----------
* Pixel and frequency coordinates are *signed*: a size-S axis runs over
  ``[-S/2, S/2)``, with index 0 stored at array position ``S/2``.  The
  forward transform is therefore ``fftshift . fft2 . ifftshift`` and the
  DC coefficient sits at the array centre.
* The forward transform is unnormalized; the inverse carries the full
  ``1/(H*W)`` factor.  Under this convention Parseval reads
  ``sum |x|^2 == sum |F|^2 / (H*W)``.
* Cropping an ``H x W`` spectrum down to ``H' x W'`` rescales every
  retained coefficient by ``(H'*W') / (H*W)`` so that pixel intensities
  (in particular the channel mean) are preserved by the round trip.
* After cropping, the output's signed index ``-H'/2`` row and ``-W'/2``
  column have lost their conjugate partners; they are zeroed so the
  cropped spectrum always inverts to an exactly real image.
* Circular masks keep the boundary ``d <= r`` on the low-pass side.  The
  distance map depends only on ``|u|, |v|``, which the periodic conjugate
  map preserves (including the unpaired Nyquist bins), so masked spectra
  of real images stay real-invertible without any repair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError, DimensionError, SymmetryError
from .image import ImageTensor

# max |imag| allowed in an inverse transform, relative to 1 + max |real|
IMAG_RESIDUE_TOL = 1e-6


@dataclass(frozen=True)
class Spectrum:
    """Single-channel complex frequency map with DC at the array centre."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=np.complex128)
        if arr.ndim != 2:
            raise DimensionError(f"expected a 2D coefficient array, got shape {arr.shape}")
        h, w = arr.shape
        if h < 2 or w < 2 or h % 2 or w % 2:
            raise DimensionError(f"spectrum sides must be positive and even, got {h}x{w}")
        if not np.all(np.isfinite(arr)):
            raise DataError("spectrum contains non-finite coefficients")
        object.__setattr__(self, "coeffs", arr)

    @property
    def height(self) -> int:
        return self.coeffs.shape[0]

    @property
    def width(self) -> int:
        return self.coeffs.shape[1]

    def at(self, u: int, v: int) -> complex:
        """Coefficient at signed frequency indices ``(u, v)``."""
        h, w = self.coeffs.shape
        if not (-h // 2 <= u < h // 2 and -w // 2 <= v < w // 2):
            raise DimensionError(f"frequency ({u}, {v}) outside [{-h//2}, {h//2}) x [{-w//2}, {w//2})")
        return complex(self.coeffs[u + h // 2, v + w // 2])

    def hermitian_residual(self) -> float:
        """Max relative deviation from ``F(u, v) == conj(F(-u, -v))``.

        Only index pairs whose negation lies in the signed range take part,
        i.e. the unpaired Nyquist row/column is excluded.
        """
        body = self.coeffs[1:, 1:]  # bins whose negation is in range
        flipped = np.conj(body[::-1, ::-1])
        scale = np.max(np.abs(body)) or 1.0
        return float(np.max(np.abs(body - flipped)) / scale)


@dataclass(frozen=True)
class CropParams:
    """Output size of a centre crop in frequency bins."""

    out_height: int
    out_width: int

    def __post_init__(self):
        for side in (self.out_height, self.out_width):
            if side < 2 or side % 2:
                raise DimensionError(f"crop sides must be positive and even, got {side}")


@dataclass(frozen=True)
class FilterParams:
    """Radius of the circular frequency mask."""

    radius: float

    def __post_init__(self):
        if not np.isfinite(self.radius) or self.radius < 0:
            raise DimensionError(f"filter radius must be >= 0, got {self.radius}")


def signed_range(size: int) -> np.ndarray:
    """Signed index axis ``[-size/2, size/2)`` in storage order."""
    return np.arange(size) - size // 2


def _centered_fft2(arr: np.ndarray) -> np.ndarray:
    return np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(arr)))


def _centered_ifft2(arr: np.ndarray) -> np.ndarray:
    return np.fft.fftshift(np.fft.ifft2(np.fft.ifftshift(arr)))


def _to_real(complex_img: np.ndarray) -> np.ndarray:
    real = complex_img.real
    residue = float(np.max(np.abs(complex_img.imag)))
    if residue > IMAG_RESIDUE_TOL * (1.0 + float(np.max(np.abs(real)))):
        raise SymmetryError(
            f"inverse transform has imaginary residue {residue:.3e}; "
            "the spectrum is not conjugate-symmetric (corrupted or improperly cropped)"
        )
    return real


def dft2(image: ImageTensor) -> Spectrum:
    """Centered 2D DFT of a single-channel image.

    Computed by FFT on the center-origin layout: the image is shifted so
    that signed pixel coordinate 0 lands at array index 0, transformed,
    and the result re-centered so DC sits at ``(H/2, W/2)``.
    """
    if image.channels != 1:
        raise DimensionError(f"dft2 expects a single channel, got {image.channels}")
    return Spectrum(_centered_fft2(image.channel(0)))


def idft2(spec: Spectrum) -> ImageTensor:
    """Inverse centered 2D DFT; raises :class:`SymmetryError` if the result is not real.

    The residue gate is ``max|imag| <= 1e-6 * (1 + max|real|)``.
    """
    return ImageTensor(_to_real(_centered_ifft2(spec.coeffs)))


def crop_spectrum(spec: Spectrum, params: CropParams) -> Spectrum:
    """Centre-crop a spectrum, rescaling retained bins by the area ratio.

    Bin ``(u, v)`` of the output equals ``(H'*W')/(H*W)`` times input bin
    ``(u, v)``.  When the output is strictly smaller along an axis, its
    signed ``-H'/2`` row (resp. ``-W'/2`` column) is zeroed: those bins
    lose their conjugate partners in the crop, and zeroing restores exact
    Hermitian symmetry.  Cropping to the input size is the identity.
    """
    h, w = spec.height, spec.width
    oh, ow = params.out_height, params.out_width
    if oh > h or ow > w:
        raise DimensionError(f"crop {oh}x{ow} exceeds source {h}x{w}")
    r0 = h // 2 - oh // 2
    c0 = w // 2 - ow // 2
    out = spec.coeffs[r0:r0 + oh, c0:c0 + ow] * ((oh * ow) / (h * w))
    if oh < h:
        out[0, :] = 0.0
    if ow < w:
        out[:, 0] = 0.0
    return Spectrum(out)


def _crop_channel(chan: np.ndarray, params: CropParams) -> np.ndarray:
    spec = Spectrum(_centered_fft2(chan))
    return _to_real(_centered_ifft2(crop_spectrum(spec, params).coeffs))


def low_frequency_crop(image: ImageTensor, bandwidth: int) -> ImageTensor:
    """Keep only the centre ``bandwidth x bandwidth`` window of each channel's spectrum.

    Per channel this is inverse-DFT of the cropped forward DFT, producing a
    ``bandwidth``-sized real image whose mean equals the input mean exactly
    (the DC bin is preserved by the area rescaling).
    """
    if bandwidth > min(image.height, image.width):
        raise DimensionError(
            f"bandwidth {bandwidth} exceeds image size {image.height}x{image.width}"
        )
    params = CropParams(bandwidth, bandwidth)
    return ImageTensor(
        np.stack([_crop_channel(image.channel(c), params) for c in range(image.channels)])
    )


def recover_low_spectrum(cropped: ImageTensor, height: int, width: int) -> Spectrum:
    """Re-embed a cropped image's spectrum into the original ``height x width`` grid.

    Inverts the bookkeeping of :func:`crop_spectrum`: the cropped image's
    DFT is rescaled by ``(H*W)/(B_h*B_w)`` and zero-padded back to the full
    size.  Composed with cropping the original spectrum, this reproduces
    every retained non-Nyquist bin.
    """
    if cropped.channels != 1:
        raise DimensionError(f"recover_low_spectrum expects a single channel, got {cropped.channels}")
    bh, bw = cropped.height, cropped.width
    if bh > height or bw > width or height % 2 or width % 2:
        raise DimensionError(f"cannot embed {bh}x{bw} into {height}x{width}")
    inner = _centered_fft2(cropped.channel(0)) * ((height * width) / (bh * bw))
    out = np.zeros((height, width), dtype=np.complex128)
    r0 = height // 2 - bh // 2
    c0 = width // 2 - bw // 2
    out[r0:r0 + bh, c0:c0 + bw] = inner
    return Spectrum(out)


def circular_mask(height: int, width: int, radius: float) -> np.ndarray:
    """Boolean low-pass mask: True where ``sqrt(u^2 + v^2) <= radius``."""
    u = signed_range(height)[:, np.newaxis].astype(np.float64)
    v = signed_range(width)[np.newaxis, :].astype(np.float64)
    return np.hypot(u, v) <= radius


def _filtered(image: ImageTensor, params: FilterParams, keep_low: bool) -> ImageTensor:
    mask = circular_mask(image.height, image.width, params.radius)
    if not keep_low:
        mask = ~mask
    chans = []
    for c in range(image.channels):
        spec = _centered_fft2(image.channel(c))
        chans.append(_to_real(_centered_ifft2(spec * mask)))
    return ImageTensor(np.stack(chans))


def low_pass_filter(image: ImageTensor, radius: float) -> ImageTensor:
    """Zero every frequency bin outside the centred circle of the given radius.

    The boundary is inclusive, so radius 0 keeps exactly the DC bin and the
    output is the per-channel mean image.
    """
    return _filtered(image, FilterParams(radius), keep_low=True)


def high_pass_filter(image: ImageTensor, radius: float) -> ImageTensor:
    """Keep the strict complement of :func:`low_pass_filter`: bins with ``d > radius``.

    For every radius, ``low_pass_filter(x, r) + high_pass_filter(x, r)``
    reproduces ``x`` (the two masks partition the bins).
    """
    return _filtered(image, FilterParams(radius), keep_low=False)


def spectral_energy(image: ImageTensor) -> float:
    """Sum of squared pixel values over all channels."""
    return float(np.sum(np.square(image.data)))
