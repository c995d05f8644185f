"""Post-convolution refinement: curvature weighting, response shrinkage,
thresholding, morphological thinning, and small-component removal."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy import ndimage

from .errors import InvalidInputError
from .image_core import as_edge_map, as_image, normalize, pad
from .tropical import classical_convolve

ThresholdMode = Literal["adaptive-mean", "fixed", "otsu"]


@dataclass(frozen=True)
class ThresholdParams:
    """Binarization rule for normalized edge responses.

    ``adaptive-mean`` compares each pixel against its window mean plus
    ``offset``; ``fixed`` uses the global ``value``; ``otsu`` picks the global
    threshold maximizing between-class variance on a 256-bin histogram.
    """

    mode: ThresholdMode = "adaptive-mean"
    window: int = 15
    offset: float = -0.02
    value: float = 0.5

    def __post_init__(self):
        if self.mode not in ("adaptive-mean", "fixed", "otsu"):
            raise InvalidInputError(f"unknown threshold mode {self.mode!r}")
        if self.window < 3 or self.window % 2 == 0:
            raise InvalidInputError(f"window must be odd and >= 3, got {self.window}")
        if not -1.0 <= self.offset <= 1.0:
            raise InvalidInputError(f"offset must be in [-1, 1], got {self.offset}")
        if not 0.0 <= self.value <= 1.0:
            raise InvalidInputError(f"fixed threshold must be in [0, 1], got {self.value}")


@dataclass(frozen=True)
class HessianResponse:
    """Per-pixel eigenvalues of the intensity Hessian, ordered |lambda1| >= |lambda2|."""

    lambda1: np.ndarray
    lambda2: np.ndarray

    def __post_init__(self):
        if self.lambda1.shape != self.lambda2.shape:
            raise InvalidInputError("eigenvalue grids must share dimensions")


def gaussian_kernel(sigma: float, max_radius: int | None = None) -> np.ndarray:
    """Normalized Gaussian kernel of side 2*ceil(3*sigma) + 1.

    ``max_radius`` caps the support so the kernel can be fitted to small
    images.
    """
    if sigma <= 0:
        raise InvalidInputError(f"sigma must be > 0, got {sigma}")
    radius = int(np.ceil(3.0 * sigma))
    if max_radius is not None:
        radius = min(radius, max(max_radius, 1))
    ax = np.arange(-radius, radius + 1, dtype=np.float64)
    g = np.exp(-(ax[:, None] ** 2 + ax[None, :] ** 2) / (2.0 * sigma ** 2))
    return g / g.sum()


def smooth(img: np.ndarray, sigma: float) -> np.ndarray:
    """Gaussian smoothing with the kernel support capped to the image size."""
    img = as_image(img)
    fit = (min(img.shape) - 1) // 2
    if sigma <= 0 or fit < 1:
        return img.copy()
    return classical_convolve(img, gaussian_kernel(sigma, max_radius=fit))


def hessian_filter(img: np.ndarray, sigma: float = 1.0) -> HessianResponse:
    """Second-derivative eigen-analysis after Gaussian smoothing at ``sigma``.

    Derivatives use central differences on a replicate-padded grid; the 2x2
    symmetric eigenproblem is solved in closed form per pixel. ``sigma=0``
    skips smoothing (useful for synthetic analytic inputs).
    """
    img = as_image(img)
    if sigma < 0:
        raise InvalidInputError(f"sigma must be >= 0, got {sigma}")
    smoothed = smooth(img, sigma)
    p = pad(smoothed, 1, "replicate")
    center = p[1:-1, 1:-1]
    d_rr = p[2:, 1:-1] - 2.0 * center + p[:-2, 1:-1]
    d_cc = p[1:-1, 2:] - 2.0 * center + p[1:-1, :-2]
    d_rc = (p[2:, 2:] - p[2:, :-2] - p[:-2, 2:] + p[:-2, :-2]) / 4.0
    mid = (d_rr + d_cc) / 2.0
    disc = np.sqrt(np.maximum(((d_rr - d_cc) / 2.0) ** 2 + d_rc ** 2, 0.0))
    hi = mid + disc
    lo = mid - disc
    swap = np.abs(lo) > np.abs(hi)
    lambda1 = np.where(swap, lo, hi)
    lambda2 = np.where(swap, hi, lo)
    return HessianResponse(lambda1, lambda2)


def hessian_enhance(edge_response: np.ndarray, hess: HessianResponse) -> np.ndarray:
    """Weight an edge response by normalized dominant curvature, renormalized to [0, 1]."""
    resp = as_image(edge_response, name="edge_response")
    if hess.lambda1.shape != resp.shape:
        raise InvalidInputError(
            f"response {resp.shape} and Hessian {hess.lambda1.shape} dimensions differ"
        )
    ridge = np.abs(hess.lambda1)
    peak = ridge.max()
    if peak > 0:
        ridge = ridge / peak
    return normalize(resp * ridge)


def wavelet_shrink(edge_response: np.ndarray) -> np.ndarray:
    """Gradient-magnitude shrinkage of a normalized response.

    Per pixel: ``|gradient of response| * (1 - response)``, with the gradient
    from central differences on a replicate-padded grid. Output is >= 0 and
    vanishes wherever the response is flat or saturated.
    """
    resp = as_image(edge_response, name="edge_response")
    if resp.min() < 0.0 or resp.max() > 1.0:
        raise InvalidInputError("edge response must be normalized to [0, 1]")
    p = pad(resp, 1, "replicate")
    d_row = (p[2:, 1:-1] - p[:-2, 1:-1]) / 2.0
    d_col = (p[1:-1, 2:] - p[1:-1, :-2]) / 2.0
    return np.hypot(d_row, d_col) * (1.0 - resp)


def otsu_threshold(img: np.ndarray) -> float:
    """Global threshold maximizing between-class variance (256-bin histogram on [0, 1])."""
    img = as_image(img)
    hist, edges = np.histogram(img, bins=256, range=(0.0, 1.0))
    total = hist.sum()
    if total == 0:
        return 0.0
    centers = (edges[:-1] + edges[1:]) / 2.0
    w0 = np.cumsum(hist)[:-1]
    w1 = total - w0
    csum = np.cumsum(hist * centers)[:-1]
    mean_total = (hist * centers).sum()
    with np.errstate(divide="ignore", invalid="ignore"):
        mu0 = csum / w0
        mu1 = (mean_total - csum) / w1
        between = w0 * w1 * (mu0 - mu1) ** 2
    between = np.where((w0 > 0) & (w1 > 0), between, -1.0)
    split = int(np.argmax(between))
    return float(edges[split + 1])


def local_mean(img: np.ndarray, window: int) -> np.ndarray:
    """Window mean with replicate borders, clipped into the exact local value range.

    The clip is a mathematical no-op (a mean always lies between the window
    extremes) but pins the floating-point result so constant regions compare
    exactly equal to their own mean.
    """
    img = as_image(img)
    mean = ndimage.uniform_filter(img, size=window, mode="nearest")
    lo = ndimage.minimum_filter(img, size=window, mode="nearest")
    hi = ndimage.maximum_filter(img, size=window, mode="nearest")
    return np.clip(mean, lo, hi)


def adaptive_threshold(edge_response: np.ndarray,
                       params: ThresholdParams = ThresholdParams()) -> np.ndarray:
    """Binarize a normalized response; a pixel is an edge iff response >= threshold.

    ``adaptive-mean`` thresholds against the local window mean plus offset,
    ``fixed`` against the global ``value``, ``otsu`` against the histogram
    split point.
    """
    resp = as_image(edge_response, name="edge_response")
    if params.mode == "fixed":
        return resp >= params.value
    if params.mode == "otsu":
        return resp >= otsu_threshold(resp)
    return resp >= local_mean(resp, params.window) + params.offset


def _zhang_suen_pass(bits: np.ndarray, first_subiteration: bool) -> np.ndarray:
    p = np.pad(bits, 1).astype(np.uint8)
    p2 = p[:-2, 1:-1]
    p3 = p[:-2, 2:]
    p4 = p[1:-1, 2:]
    p5 = p[2:, 2:]
    p6 = p[2:, 1:-1]
    p7 = p[2:, :-2]
    p8 = p[1:-1, :-2]
    p9 = p[:-2, :-2]
    ring = (p2, p3, p4, p5, p6, p7, p8, p9)
    neighbor_count = sum(int_arr.astype(np.int64) for int_arr in ring)
    transitions = np.zeros_like(neighbor_count)
    for a, b in zip(ring, ring[1:] + ring[:1]):
        transitions += ((a == 0) & (b == 1)).astype(np.int64)
    if first_subiteration:
        gate = ((p2 & p4 & p6) == 0) & ((p4 & p6 & p8) == 0)
    else:
        gate = ((p2 & p4 & p8) == 0) & ((p2 & p6 & p8) == 0)
    removable = (bits
                 & (neighbor_count >= 2) & (neighbor_count <= 6)
                 & (transitions == 1)
                 & gate)
    return bits & ~removable


def thin(edges: np.ndarray) -> np.ndarray:
    """Two-subiteration morphological thinning to 1-pixel-wide skeletons.

    Iterates the standard two-phase deletion scheme to its fixed point; pixels
    are only ever removed, so the output is a subset of the input.
    """
    bits = as_edge_map(edges)
    current = bits.copy()
    while True:
        after_first = _zhang_suen_pass(current, first_subiteration=True)
        after_second = _zhang_suen_pass(after_first, first_subiteration=False)
        if np.array_equal(after_second, current):
            return after_second
        current = after_second


#: 8-connectivity structuring element for component labeling.
_CONN8 = np.ones((3, 3), dtype=bool)


def area_filter(edges: np.ndarray, min_pixels: int) -> np.ndarray:
    """Drop 8-connected components with fewer than ``min_pixels`` pixels."""
    bits = as_edge_map(edges)
    if min_pixels < 0:
        raise InvalidInputError(f"min_pixels must be >= 0, got {min_pixels}")
    if min_pixels <= 1 or not bits.any():
        return bits.copy()
    labels, count = ndimage.label(bits, structure=_CONN8)
    sizes = np.bincount(labels.ravel(), minlength=count + 1)
    keep = sizes >= min_pixels
    keep[0] = False
    return keep[labels]
