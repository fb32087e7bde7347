"""Pixel-domain tensor type, the unit every transform consumes and produces."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError, DimensionError


@dataclass(frozen=True)
class ImageTensor:
    """Real-valued image stored channels-first as a float64 ``(C, H, W)`` array.

    Height and width must be even: all spectral operations assume even
    sizes, so odd images are rejected up front rather than at transform
    time.  A 2D array is promoted to a single channel.
    """

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim == 2:
            arr = arr[np.newaxis]
        if arr.ndim != 3:
            raise DimensionError(f"expected (C, H, W) or (H, W) data, got shape {arr.shape}")
        _, h, w = arr.shape
        if h < 2 or w < 2 or h % 2 or w % 2:
            raise DimensionError(f"height and width must be positive and even, got {h}x{w}")
        if not np.all(np.isfinite(arr)):
            raise DataError("image contains non-finite values")
        object.__setattr__(self, "data", arr)

    @property
    def channels(self) -> int:
        return self.data.shape[0]

    @property
    def height(self) -> int:
        return self.data.shape[1]

    @property
    def width(self) -> int:
        return self.data.shape[2]

    def channel(self, c: int) -> np.ndarray:
        """2D view of one channel."""
        return self.data[c]

    def channel_means(self) -> np.ndarray:
        return self.data.mean(axis=(1, 2))

    def __eq__(self, other) -> bool:
        return isinstance(other, ImageTensor) and np.array_equal(self.data, other.data)
