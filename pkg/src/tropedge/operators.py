"""Classical edge detectors (Roberts, Prewitt, Sobel, LoG, Canny) and their
tropical counterparts built on min-plus convolution.

The tropical variants share the classical stencils but evaluate them in the
min-plus semiring, so each response tracks the dominant local intensity drop;
after sign inversion and normalization, stronger edges are brighter and the
result is invariant to global additive intensity shifts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import ndimage

from .enhance import ThresholdParams, local_mean, otsu_threshold, smooth
from .errors import InvalidInputError
from .image_core import as_image, normalize
from .tropical import classical_convolve, tropical_convolve


class GradientPair(NamedTuple):
    """Directional responses of a gradient stencil pair."""

    gx: np.ndarray
    gy: np.ndarray


@dataclass(frozen=True)
class CannyParams:
    """Gaussian scale and hysteresis thresholds (0 <= low < high <= 1)."""

    sigma: float = 1.4
    low: float = 0.1
    high: float = 0.3

    def __post_init__(self):
        if self.sigma <= 0:
            raise InvalidInputError(f"sigma must be > 0, got {self.sigma}")
        if not (0.0 <= self.low < self.high <= 1.0):
            raise InvalidInputError(
                f"need 0 <= low < high <= 1, got low={self.low}, high={self.high}"
            )


# The Roberts stencils are 2x2 by definition; they are embedded in 3x3 frames
# (anchor = current pixel) so every kernel in the library is odd-sided.
ROBERTS_X = np.array([[0, 0, 0], [0, 1, 0], [0, 0, -1]], dtype=np.float64)
ROBERTS_Y = np.array([[0, 0, 0], [0, 0, 1], [0, -1, 0]], dtype=np.float64)

PREWITT_X = np.array([[1, 1, 1], [0, 0, 0], [-1, -1, -1]], dtype=np.float64)
PREWITT_Y = np.array([[-1, 0, 1], [-1, 0, 1], [-1, 0, 1]], dtype=np.float64)

SOBEL_X = np.array([[-1, -2, -1], [0, 0, 0], [1, 2, 1]], dtype=np.float64)
SOBEL_Y = SOBEL_X.T.copy()

GRADIENT_KERNELS = {
    "roberts": (ROBERTS_X, ROBERTS_Y),
    "prewitt": (PREWITT_X, PREWITT_Y),
    "sobel": (SOBEL_X, SOBEL_Y),
}


def _gradient_kernels(operator: str) -> tuple[np.ndarray, np.ndarray]:
    try:
        return GRADIENT_KERNELS[operator]
    except KeyError:
        raise InvalidInputError(
            f"unknown gradient operator {operator!r}; use one of {sorted(GRADIENT_KERNELS)}"
        ) from None


def classical_gradient(img: np.ndarray, operator: str) -> GradientPair:
    """Directional responses of the named stencil pair (roberts/prewitt/sobel)."""
    kx, ky = _gradient_kernels(operator)
    return GradientPair(classical_convolve(img, kx), classical_convolve(img, ky))


def gradient_magnitude(pair: GradientPair) -> np.ndarray:
    """Per-pixel Euclidean norm of a gradient pair."""
    gx = as_image(pair.gx, name="gx")
    gy = as_image(pair.gy, name="gy")
    if gx.shape != gy.shape:
        raise InvalidInputError("gradient components must share dimensions")
    return np.hypot(gx, gy)


def log_kernel(sigma: float) -> np.ndarray:
    """Discretized Laplacian-of-Gaussian kernel of side 2*ceil(3*sigma) + 1.

    Mean-subtracted so the coefficients sum to zero (no DC response).
    """
    if sigma <= 0:
        raise InvalidInputError(f"sigma must be > 0, got {sigma}")
    radius = int(np.ceil(3.0 * sigma))
    ax = np.arange(-radius, radius + 1, dtype=np.float64)
    r2 = ax[:, None] ** 2 + ax[None, :] ** 2
    k = (r2 - 2.0 * sigma ** 2) / sigma ** 4 * np.exp(-r2 / (2.0 * sigma ** 2))
    return k - k.mean()


def log_detect(img: np.ndarray, sigma: float = 1.4,
               contrast_floor: float = 0.01) -> np.ndarray:
    """Zero-crossing response of the Laplacian-of-Gaussian.

    Convolves with the discretized LoG kernel, then marks, for every adjacent
    pixel pair whose responses change sign with contrast above the floor, the
    pixel nearer the crossing with that contrast. Flat images produce an
    all-zero response.
    """
    img = as_image(img)
    resp = classical_convolve(img, log_kernel(sigma))
    out = np.zeros_like(resp)

    def _mark(a_idx, b_idx):
        a = resp[a_idx]
        b = resp[b_idx]
        contrast = np.abs(a - b)
        crossing = (a * b < 0) & (contrast > contrast_floor)
        nearer_a = np.abs(a) <= np.abs(b)
        out[a_idx] = np.maximum(out[a_idx], np.where(crossing & nearer_a, contrast, 0.0))
        out[b_idx] = np.maximum(out[b_idx], np.where(crossing & ~nearer_a, contrast, 0.0))

    _mark((slice(None), slice(None, -1)), (slice(None), slice(1, None)))
    _mark((slice(None, -1), slice(None)), (slice(1, None), slice(None)))
    return out


def _shift(arr: np.ndarray, dr: int, dc: int, fill: float) -> np.ndarray:
    """Array of neighbor values at offset (dr, dc), out-of-bounds -> fill."""
    h, w = arr.shape
    out = np.full_like(arr, fill)
    out[max(0, -dr):h - max(0, dr), max(0, -dc):w - max(0, dc)] = \
        arr[max(0, dr):h - max(0, -dr), max(0, dc):w - max(0, -dc)]
    return out


#: Quantized step offsets for the four NMS sectors (0, 45, 90, 135 degrees).
_NMS_OFFSETS = ((0, 1), (1, 1), (1, 0), (1, -1))


def _non_maximum_suppression(mag: np.ndarray, d_row: np.ndarray,
                             d_col: np.ndarray) -> np.ndarray:
    """Keep pixels that dominate both neighbors along the quantized gradient.

    The comparison is strict on one side (``>`` backward, ``>=`` forward) so
    two-pixel plateaus resolve to a single deterministic line.
    """
    angle = np.mod(np.arctan2(d_row, d_col), np.pi)
    sector = np.zeros(mag.shape, dtype=np.int8)
    sector[(angle >= np.pi / 8) & (angle < 3 * np.pi / 8)] = 1
    sector[(angle >= 3 * np.pi / 8) & (angle < 5 * np.pi / 8)] = 2
    sector[(angle >= 5 * np.pi / 8) & (angle < 7 * np.pi / 8)] = 3
    keep = np.zeros(mag.shape, dtype=bool)
    for s, (dr, dc) in enumerate(_NMS_OFFSETS):
        forward = _shift(mag, dr, dc, -np.inf)
        backward = _shift(mag, -dr, -dc, -np.inf)
        keep |= (sector == s) & (mag >= forward) & (mag > backward)
    return np.where(keep, mag, 0.0)


_CONN8 = np.ones((3, 3), dtype=bool)


def _hysteresis(strong: np.ndarray, weak: np.ndarray) -> np.ndarray:
    """Grow strong pixels through 8-connected weak regions."""
    if not strong.any():
        return np.zeros_like(strong)
    labels, count = ndimage.label(weak | strong, structure=_CONN8)
    seeded = np.zeros(count + 1, dtype=bool)
    seeded[np.unique(labels[strong])] = True
    seeded[0] = False
    return seeded[labels]


def canny_detect(img: np.ndarray, params: CannyParams = CannyParams()) -> np.ndarray:
    """Classic four-stage edge detection.

    Gaussian smoothing, Sobel gradients, non-maximum suppression along the
    quantized gradient direction, then hysteresis: pixels at or above ``high``
    (on the max-normalized magnitude) seed 8-connected growth through pixels
    at or above ``low``.
    """
    img = as_image(img)
    smoothed = smooth(img, params.sigma)
    pair = classical_gradient(smoothed, "sobel")
    mag = gradient_magnitude(pair)
    peak = mag.max()
    # A peak below float-summation dust means a featureless image; normalizing
    # it would amplify rounding noise to full scale.
    if peak > 1e-9:
        mag = mag / peak
    suppressed = _non_maximum_suppression(mag, pair.gx, pair.gy)
    return _hysteresis(suppressed >= params.high, suppressed >= params.low)


def _minplus_excursion(img: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Drop of the min-plus response below its flat-image baseline.

    On a constant image the min-plus response is exactly ``min(kernel) +
    intensity``; subtracting that baseline leaves zero on flat regions and a
    negative excursion wherever a dominant downward transition is reachable,
    which localizes the response at edges and cancels additive shifts.
    """
    resp = tropical_convolve(img, kernel, "min-plus")
    return resp - img - kernel.min()


def tg_gradient_detect(img: np.ndarray, operator: str) -> np.ndarray:
    """Min-plus evaluation of a classical gradient stencil pair.

    Both directional responses are taken in the min-plus semiring as
    excursions below the flat-image baseline, combined by element-wise min
    (the dominant drop), sign-inverted with upward excursions clamped to zero
    (a downward edge belongs to the pixel above the drop), and normalized so
    stronger edges are brighter. Global additive intensity shifts cancel.
    """
    img = as_image(img)
    kx, ky = _gradient_kernels(operator)
    drop_x = _minplus_excursion(img, kx)
    drop_y = _minplus_excursion(img, ky)
    return normalize(np.maximum(-np.minimum(drop_x, drop_y), 0.0))


#: Tropical kernel coefficients act as intensity offsets, so stencils built
#: from derivative filters are rescaled to this maximum magnitude before use.
TROPICAL_KERNEL_SCALE = 0.1


def tg_log_detect(img: np.ndarray, sigma: float = 1.4) -> np.ndarray:
    """Min-plus evaluation of the LoG stencil.

    The LoG kernel is rescaled into intensity units, applied as a min-plus
    convolution, and compared against the flat-image baseline (image plus the
    center coefficient); the magnitude of the negative excursion below that
    baseline, normalized to [0, 1], is the edge strength.
    """
    img = as_image(img)
    k = log_kernel(sigma)
    k = k * (TROPICAL_KERNEL_SCALE / np.abs(k).max())
    return normalize(np.maximum(-_minplus_excursion(img, k), 0.0))


def cone_kernel(radius: int, slope: float = 0.05) -> np.ndarray:
    """Non-negative cone-shaped structuring function: slope * distance from center."""
    if radius < 1:
        raise InvalidInputError(f"radius must be >= 1, got {radius}")
    ax = np.arange(-radius, radius + 1, dtype=np.float64)
    return slope * np.sqrt(ax[:, None] ** 2 + ax[None, :] ** 2)


#: Default hysteresis rule for the tropical Canny variant. The positive
#: offset demands responses above the local mean, which drops the weak
#: foothill lines the cone erosion leaves beside high-contrast steps.
TG_CANNY_THRESHOLD = ThresholdParams(offset=0.02)


def tg_canny_detect(img: np.ndarray, params: CannyParams = CannyParams(),
                    threshold: ThresholdParams = TG_CANNY_THRESHOLD) -> np.ndarray:
    """Tropical analog of the Canny pipeline.

    Stage 1 smooths by min-plus convolution with a cone structuring function
    (flat-preserving erosion); stage 2 computes the normalized min-plus Sobel
    response; stage 3 applies non-maximum suppression along the quantized
    gradient direction of that response; stage 4 runs hysteresis with an
    adaptive high threshold (window mean of the response plus offset) and
    low = 0.4 * high. Pixels with zero response never seed or join edges, so
    flat inputs yield empty maps.
    """
    img = as_image(img)
    cone_radius = max(1, int(np.ceil(2.0 * params.sigma)))
    smoothed = tropical_convolve(img, cone_kernel(cone_radius), "min-plus")
    resp = tg_gradient_detect(smoothed, "sobel")
    direction = classical_gradient(resp, "sobel")
    suppressed = _non_maximum_suppression(resp, direction.gx, direction.gy)
    high = local_mean(resp, threshold.window) + threshold.offset
    low = 0.4 * high
    positive = suppressed > 0
    strong = positive & (suppressed >= high)
    weak = positive & (suppressed >= low)
    return _hysteresis(strong, weak)


def binarize_response(resp: np.ndarray, threshold: float | None = None) -> np.ndarray:
    """Binarize a normalized response at a fixed threshold, or Otsu when None."""
    resp = as_image(resp, name="response")
    t = otsu_threshold(resp) if threshold is None else float(threshold)
    return resp >= t
