"""File formats: the ETNS raw-tensor container and 8-bit image conversion.

ETNS layout (all integers little-endian):

    magic   4 bytes  b"ETNS"
    version u32      1
    dtype   u8       1 = float32, 2 = float64, 3 = uint8
    ndim    u8
    dims    ndim x u64
    payload row-major data, little-endian

8-bit images convert to doubles as ``value / 255`` and back with a
round-half-up requantization after clamping to ``[0, 1]``; the round trip
is lossless for 8-bit sources.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DataError
from .image import ImageTensor

MAGIC = b"ETNS"
VERSION = 1

_DTYPE_CODES = {np.dtype("float32"): 1, np.dtype("float64"): 2, np.dtype("uint8"): 3}
_CODE_DTYPES = {1: np.dtype("<f4"), 2: np.dtype("<f8"), 3: np.dtype("u1")}


def write_tensor(path: str | Path, arr: np.ndarray):
    """Write an array as an ETNS file; dtype must be f32, f64 or u8."""
    arr = np.ascontiguousarray(arr)
    if arr.dtype not in _DTYPE_CODES:
        raise DataError(f"unsupported tensor dtype {arr.dtype}; expected float32, float64 or uint8")
    if arr.ndim < 1 or any(d < 1 for d in arr.shape):
        raise DataError(f"tensor dims must all be >= 1, got shape {arr.shape}")
    code = _DTYPE_CODES[arr.dtype]
    header = MAGIC + struct.pack("<IBB", VERSION, code, arr.ndim)
    header += struct.pack(f"<{arr.ndim}Q", *arr.shape)
    payload = arr.astype(_CODE_DTYPES[code], copy=False).tobytes()
    Path(path).write_bytes(header + payload)


def read_tensor(path: str | Path) -> np.ndarray:
    """Read an ETNS file back into a numpy array (native byte order)."""
    blob = Path(path).read_bytes()
    if len(blob) < 10 or blob[:4] != MAGIC:
        raise DataError(f"{path}: not an ETNS tensor file")
    version, code, ndim = struct.unpack_from("<IBB", blob, 4)
    if version != VERSION:
        raise DataError(f"{path}: unsupported ETNS version {version}")
    if code not in _CODE_DTYPES:
        raise DataError(f"{path}: unknown dtype code {code}")
    offset = 10
    if len(blob) < offset + 8 * ndim:
        raise DataError(f"{path}: truncated ETNS header")
    dims = struct.unpack_from(f"<{ndim}Q", blob, offset)
    if any(d < 1 for d in dims):
        raise DataError(f"{path}: tensor dims must all be >= 1, got {dims}")
    offset += 8 * ndim
    dtype = _CODE_DTYPES[code]
    expected = int(np.prod(dims)) * dtype.itemsize
    if len(blob) - offset != expected:
        raise DataError(
            f"{path}: payload is {len(blob) - offset} bytes, expected {expected} for dims {dims}"
        )
    arr = np.frombuffer(blob, dtype=dtype, count=int(np.prod(dims)), offset=offset)
    return arr.reshape(dims).astype(dtype.newbyteorder("="), copy=False)


def u8_to_unit(arr: np.ndarray) -> np.ndarray:
    """8-bit values to doubles in [0, 1]."""
    return arr.astype(np.float64) / 255.0


def unit_to_u8(arr: np.ndarray) -> np.ndarray:
    """Doubles to 8-bit: clamp to [0, 1], scale by 255, round half-up."""
    return np.floor(np.clip(arr, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)


def load_image(path: str | Path) -> ImageTensor:
    """Load a PNG/PGM image or an ETNS tensor into a unit-range ImageTensor.

    8-bit data is divided by 255; float tensors are taken as-is.
    """
    path = Path(path)
    head = path.read_bytes()[:4] if path.exists() else b""
    if head == MAGIC:
        arr = read_tensor(path)
        if arr.dtype == np.uint8:
            arr = u8_to_unit(arr)
        if arr.ndim == 2:
            arr = arr[np.newaxis]
        if arr.ndim != 3:
            raise DataError(f"{path}: tensor must be (H, W) or (C, H, W), got shape {arr.shape}")
        return ImageTensor(arr.astype(np.float64))
    try:
        with Image.open(path) as img:
            if img.mode not in ("L", "RGB"):
                img = img.convert("RGB")
            arr = np.asarray(img)
    except (UnidentifiedImageError, OSError, SyntaxError, ValueError) as exc:
        raise DataError(f"{path}: cannot decode image: {exc}") from exc
    if arr.ndim == 2:
        arr = arr[np.newaxis]
    else:
        arr = np.moveaxis(arr, -1, 0)
    return ImageTensor(u8_to_unit(arr))


def save_png(path: str | Path, image: ImageTensor):
    """Quantize a unit-range image to 8 bits and write a PNG."""
    arr = unit_to_u8(image.data)
    if arr.shape[0] == 1:
        pil = Image.fromarray(arr[0], mode="L")
    elif arr.shape[0] == 3:
        pil = Image.fromarray(np.moveaxis(arr, 0, -1), mode="RGB")
    else:
        raise DataError(f"can only write 1- or 3-channel PNGs, got {arr.shape[0]} channels")
    pil.save(path, format="PNG")


def save_pgm(path: str | Path, image: ImageTensor):
    """Write a single-channel unit-range image as binary PGM (P5)."""
    if image.channels != 1:
        raise DataError(f"PGM holds a single channel, got {image.channels}")
    arr = unit_to_u8(image.data[0])
    header = f"P5\n{arr.shape[1]} {arr.shape[0]}\n255\n".encode("ascii")
    Path(path).write_bytes(header + arr.tobytes())
