"""Image carriers, padding, resizing, normalization, and 8-bit file I/O.

Images are plain 2D ``numpy`` arrays of float64 intensities, row-major,
nominally in [0, 1] after loading from disk (8-bit values map via v/255).
Color inputs are (H, W, 3) arrays with the same scaling. Kernels are small
odd-sided 2D float arrays anchored at their center cell. Edge maps are 2D
boolean arrays. All operations are pure functions over these carriers.
"""

from __future__ import annotations

import os
from typing import Literal

import numpy as np
from PIL import Image as _PILImage

from .errors import InvalidInputError

PaddingMode = Literal["zero", "replicate"]

#: Luminance weights for RGB -> gray conversion (ITU-R BT.601).
LUMA_WEIGHTS = (0.299, 0.587, 0.114)


def as_image(arr, *, name: str = "image") -> np.ndarray:
    """Validate and return a 2D float64 image array.

    Accepts anything array-like; raises :class:`InvalidInputError` for wrong
    dimensionality, empty axes, or non-finite values.
    """
    img = np.asarray(arr, dtype=np.float64)
    if img.ndim != 2:
        raise InvalidInputError(f"{name} must be 2D, got shape {img.shape}")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise InvalidInputError(f"{name} must be at least 1x1, got {img.shape}")
    if not np.isfinite(img).all():
        raise InvalidInputError(f"{name} contains NaN or infinite values")
    return img


def as_kernel(arr, *, name: str = "kernel") -> np.ndarray:
    """Validate and return a square, odd-sided, finite 2D kernel array."""
    k = np.asarray(arr, dtype=np.float64)
    if k.ndim != 2 or k.shape[0] != k.shape[1]:
        raise InvalidInputError(f"{name} must be square 2D, got shape {k.shape}")
    if k.shape[0] % 2 == 0:
        raise InvalidInputError(f"{name} side must be odd, got {k.shape[0]}")
    if not np.isfinite(k).all():
        raise InvalidInputError(f"{name} contains NaN or infinite values")
    return k


def as_edge_map(arr, *, name: str = "edges") -> np.ndarray:
    """Validate and return a 2D boolean edge map."""
    e = np.asarray(arr)
    if e.ndim != 2:
        raise InvalidInputError(f"{name} must be 2D, got shape {e.shape}")
    return e.astype(bool)


def to_grayscale(rgb: np.ndarray) -> np.ndarray:
    """Convert an (H, W, 3) image to single-channel luminance.

    Uses the fixed 0.299/0.587/0.114 weights; output stays in [0, 1] for
    inputs in [0, 1]. Raises :class:`InvalidInputError` unless the input has
    exactly three channels.
    """
    arr = np.asarray(rgb, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise InvalidInputError(f"expected (H, W, 3) image, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise InvalidInputError("image contains NaN or infinite values")
    w = np.asarray(LUMA_WEIGHTS)
    return arr @ w


def pad(img: np.ndarray, margin: int, mode: PaddingMode = "replicate") -> np.ndarray:
    """Pad an image by ``margin`` pixels on every side.

    ``"zero"`` pads with zeros; ``"replicate"`` repeats the border pixels.
    """
    img = as_image(img)
    if margin < 0:
        raise InvalidInputError(f"margin must be >= 0, got {margin}")
    if margin == 0:
        return img.copy()
    if mode == "zero":
        return np.pad(img, margin, mode="constant")
    if mode == "replicate":
        return np.pad(img, margin, mode="edge")
    raise InvalidInputError(f"unknown padding mode {mode!r}")


def _round_half_up(x: float) -> int:
    return int(np.floor(x + 0.5))


def resize_to(img: np.ndarray, dims: tuple[int, int]) -> np.ndarray:
    """Bilinear resize to exact (height, width).

    Sample positions use the half-pixel-center convention:
    ``src = (dst + 0.5) / scale - 0.5``, clamped to the source grid.
    """
    img = as_image(img)
    out_h, out_w = int(dims[0]), int(dims[1])
    if out_h < 1 or out_w < 1:
        raise InvalidInputError(f"target dimensions must be >= 1, got {dims}")
    in_h, in_w = img.shape
    if (out_h, out_w) == (in_h, in_w):
        return img.copy()

    def _axis_coords(n_out: int, n_in: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        src = (np.arange(n_out) + 0.5) * (n_in / n_out) - 0.5
        src = np.clip(src, 0.0, n_in - 1.0)
        lo = np.floor(src).astype(int)
        hi = np.minimum(lo + 1, n_in - 1)
        frac = src - lo
        return lo, hi, frac

    r0, r1, fr = _axis_coords(out_h, in_h)
    c0, c1, fc = _axis_coords(out_w, in_w)
    top = img[r0][:, c0] * (1 - fc) + img[r0][:, c1] * fc
    bot = img[r1][:, c0] * (1 - fc) + img[r1][:, c1] * fc
    return top * (1 - fr[:, None]) + bot * fr[:, None]


def resize(img: np.ndarray, factor: float) -> np.ndarray:
    """Bilinear resize by a positive scale factor.

    Output dimensions are ``round(dim * factor)`` (half-up) and must stay
    >= 1; a factor of exactly 1.0 returns a copy of the input.
    """
    img = as_image(img)
    if not np.isfinite(factor) or factor <= 0:
        raise InvalidInputError(f"resize factor must be > 0, got {factor}")
    out_h = _round_half_up(img.shape[0] * factor)
    out_w = _round_half_up(img.shape[1] * factor)
    if out_h < 1 or out_w < 1:
        raise InvalidInputError(
            f"resize factor {factor} collapses {img.shape} below 1 pixel"
        )
    return resize_to(img, (out_h, out_w))


def normalize(img: np.ndarray) -> np.ndarray:
    """Affinely map [min, max] onto [0, 1]; a constant image maps to zeros."""
    img = as_image(img)
    lo = img.min()
    hi = img.max()
    if hi == lo:
        return np.zeros_like(img)
    return (img - lo) / (hi - lo)


# --------------------------------------------------------------------------
# 8-bit grayscale / RGB file I/O (PGM binary P5 and PNG)
# --------------------------------------------------------------------------

SUPPORTED_EXTENSIONS = (".png", ".pgm")


def load_image(path: str | os.PathLike) -> np.ndarray:
    """Load an 8-bit PNG or binary PGM as floats in [0, 1].

    Grayscale files become (H, W) arrays; color PNGs become (H, W, 3).
    """
    try:
        with _PILImage.open(path) as im:
            if im.mode in ("L", "I;16", "1"):
                im = im.convert("L")
                arr = np.asarray(im, dtype=np.float64)
            else:
                im = im.convert("RGB")
                arr = np.asarray(im, dtype=np.float64)
    except (OSError, ValueError) as exc:
        raise InvalidInputError(f"cannot read image {path}: {exc}") from exc
    return arr / 255.0


def save_image(path: str | os.PathLike, img: np.ndarray) -> None:
    """Write an image as 8-bit grayscale PNG or binary PGM (by extension).

    Float inputs are clipped to [0, 1] and quantized via round(v * 255);
    boolean edge maps map to {0, 255}.
    """
    arr = np.asarray(img)
    if arr.dtype == bool:
        data = np.where(arr, 255, 0).astype(np.uint8)
    else:
        data = np.clip(np.asarray(arr, dtype=np.float64), 0.0, 1.0)
        data = np.rint(data * 255.0).astype(np.uint8)
    if data.ndim not in (2, 3):
        raise InvalidInputError(f"cannot save array of shape {data.shape}")
    ext = os.path.splitext(os.fspath(path))[1].lower()
    if ext not in SUPPORTED_EXTENSIONS:
        raise InvalidInputError(f"unsupported image extension {ext!r}")
    if ext == ".pgm" and data.ndim == 3:
        raise InvalidInputError("PGM supports grayscale only")
    _PILImage.fromarray(data).save(path)
