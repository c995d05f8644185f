"""Edge-preserving preprocessing: bilateral filter, shock filter, multi-scale pairs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .image_core import as_image, pad, resize, resize_to


@dataclass(frozen=True)
class BilateralParams:
    """Spatial/range Gaussian widths and window radius for the bilateral filter."""

    sigma_spatial: float = 2.0
    sigma_range: float = 0.1
    radius: int = 3

    def __post_init__(self):
        if self.sigma_spatial <= 0 or self.sigma_range <= 0:
            raise InvalidInputError("bilateral sigmas must be > 0")
        if not 1 <= self.radius <= 7:
            raise InvalidInputError(f"bilateral radius must be in [1, 7], got {self.radius}")


@dataclass(frozen=True)
class ShockParams:
    """Sharpening strength (in [0, 1]) and iteration count for the shock filter."""

    strength: float = 0.3
    iterations: int = 5

    def __post_init__(self):
        if not 0.0 <= self.strength <= 1.0:
            raise InvalidInputError(f"shock strength must be in [0, 1], got {self.strength}")
        if not 1 <= self.iterations <= 50:
            raise InvalidInputError(f"shock iterations must be in [1, 50], got {self.iterations}")


@dataclass(frozen=True)
class ScalePair:
    """Down/up scale factors bracketing the working resolution (small < 1 < large)."""

    small: float = 0.5
    large: float = 1.5

    def __post_init__(self):
        if not (0.0 < self.small < 1.0 < self.large):
            raise InvalidInputError(
                f"scale pair must satisfy 0 < small < 1 < large, got {self.small}, {self.large}"
            )


def bilateral_filter(img: np.ndarray, params: BilateralParams = BilateralParams()) -> np.ndarray:
    """Edge-preserving smoothing by a range- and distance-weighted local mean.

    Each output pixel is a convex combination of its (2r+1)^2 neighborhood
    with weights ``exp(-d^2 / 2*sigma_spatial^2) * exp(-dv^2 / 2*sigma_range^2)``
    normalized by their sum, so the output range never leaves the input range.
    """
    img = as_image(img)
    r = params.radius
    padded = pad(img, r, "replicate")
    h, w = img.shape
    inv_2ss = 1.0 / (2.0 * params.sigma_spatial ** 2)
    inv_2sr = 1.0 / (2.0 * params.sigma_range ** 2)
    weight_sum = np.zeros((h, w))
    value_sum = np.zeros((h, w))
    for di in range(-r, r + 1):
        for dj in range(-r, r + 1):
            shifted = padded[r + di:r + di + h, r + dj:r + dj + w]
            wgt = np.exp(-(di * di + dj * dj) * inv_2ss
                         - (shifted - img) ** 2 * inv_2sr)
            weight_sum += wgt
            value_sum += wgt * shifted
    return value_sum / weight_sum


def _central_gradient(img: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Central differences on a replicate-padded grid; returns (d_row, d_col)."""
    p = pad(img, 1, "replicate")
    h, w = img.shape
    d_row = (p[2:, 1:-1] - p[:-2, 1:-1]) / 2.0
    d_col = (p[1:-1, 2:] - p[1:-1, :-2]) / 2.0
    return d_row, d_col


def _laplacian(img: np.ndarray) -> np.ndarray:
    p = pad(img, 1, "replicate")
    h, w = img.shape
    center = p[1:-1, 1:-1]
    return (p[:-2, 1:-1] + p[2:, 1:-1] + p[1:-1, :-2] + p[1:-1, 2:]) - 4.0 * center


def shock_filter(img: np.ndarray, params: ShockParams = ShockParams()) -> np.ndarray:
    """Iterative edge sharpening that transports intensity toward the nearer plateau.

    Each iteration subtracts ``strength * sign(laplacian) * |gradient|``: where
    the image is locally convex intensities move down, where concave they move
    up, steepening transitions. Results are clamped to the input's value range
    (so [0, 1] inputs stay in [0, 1]); zero strength is the exact identity.
    """
    img = as_image(img)
    if params.strength == 0.0:
        return img.copy()
    lo = img.min()
    hi = img.max()
    out = img.copy()
    for _ in range(params.iterations):
        d_row, d_col = _central_gradient(out)
        magnitude = np.hypot(d_row, d_col)
        steer = np.sign(_laplacian(out))
        out = np.clip(out - params.strength * steer * magnitude, lo, hi)
    return out


def make_scale_pair(img: np.ndarray, scales: ScalePair = ScalePair()) -> tuple[np.ndarray, np.ndarray]:
    """Return the (downscaled, upscaled) image pair for multi-scale detection."""
    img = as_image(img)
    return resize(img, scales.small), resize(img, scales.large)


def merge_scales(responses: list[np.ndarray], target_dims: tuple[int, int]) -> np.ndarray:
    """Resize every response to ``target_dims`` and keep the element-wise maximum."""
    if not responses:
        raise InvalidInputError("merge_scales needs at least one response")
    out = resize_to(as_image(responses[0], name="response"), target_dims)
    for resp in responses[1:]:
        out = np.maximum(out, resize_to(as_image(resp, name="response"), target_dims))
    return out
