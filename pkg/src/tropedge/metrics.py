"""Edge-quality metrics: co-occurrence statistics, contrast ratio, reference
correlation, the block-contrast enhancement measure, and report serialization.

A gray-level co-occurrence matrix (GLCM) is the normalized joint histogram of
quantized intensity pairs at a fixed pixel displacement. Five texture
statistics are derived from it:

    contrast     = sum (i - j)^2 * P(i, j)
    correlation  = sum (i - mu_i)(j - mu_j) P(i, j) / (sigma_i * sigma_j)
    energy       = sum P(i, j)^2
    entropy      = -sum P(i, j) * log2 P(i, j)        (0 * log 0 := 0)
    homogeneity  = sum P(i, j) / (1 + |i - j|)

Degenerate marginals (zero variance) report correlation as 1.0 by convention;
report builders flag the convention in the parameter record.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from ._version import __version__
from .errors import InvalidInputError
from .image_core import as_edge_map, as_image


@dataclass(frozen=True)
class Glcm:
    """Normalized co-occurrence counts for one displacement.

    ``counts[i, j]`` is the joint frequency of level ``i`` at a pixel and
    level ``j`` at the pixel displaced by ``offset`` (row delta, column
    delta); entries are non-negative and sum to 1.
    """

    levels: int
    counts: np.ndarray
    offset: tuple[int, int]

    def __post_init__(self):
        if self.counts.shape != (self.levels, self.levels):
            raise InvalidInputError(
                f"counts must be {self.levels}x{self.levels}, got {self.counts.shape}"
            )
        if (self.counts < 0).any():
            raise InvalidInputError("co-occurrence entries must be >= 0")
        if abs(float(self.counts.sum()) - 1.0) > 1e-9:
            raise InvalidInputError("co-occurrence entries must sum to 1")


class GlcmStats(NamedTuple):
    contrast: float
    correlation: float
    energy: float
    entropy: float
    homogeneity: float


def quantize_levels(img: np.ndarray, levels: int) -> np.ndarray:
    """Uniformly quantize [0, 1] intensities into ``levels`` integer bins."""
    img = as_image(img)
    bins = np.floor(np.clip(img, 0.0, 1.0) * levels).astype(np.int64)
    return np.minimum(bins, levels - 1)


def glcm(img: np.ndarray, levels: int = 8, offset: tuple[int, int] = (0, 1)) -> Glcm:
    """Build the co-occurrence matrix for a displacement (non-symmetric).

    ``offset=(0, 1)`` pairs each pixel with its right-hand neighbor. Raises
    :class:`InvalidInputError` for a zero offset, fewer than two levels, or an
    image too small to contain any displaced pair.
    """
    img = as_image(img)
    if levels < 2:
        raise InvalidInputError(f"levels must be >= 2, got {levels}")
    dr, dc = int(offset[0]), int(offset[1])
    if dr == 0 and dc == 0:
        raise InvalidInputError("offset must be nonzero")
    h, w = img.shape
    if abs(dr) >= h or abs(dc) >= w:
        raise InvalidInputError(f"image {img.shape} smaller than offset span {offset}")
    bins = quantize_levels(img, levels)
    src = bins[max(0, -dr):h - max(0, dr), max(0, -dc):w - max(0, dc)]
    dst = bins[max(0, dr):h - max(0, -dr), max(0, dc):w - max(0, -dc)]
    flat = src.ravel() * levels + dst.ravel()
    counts = np.bincount(flat, minlength=levels * levels).astype(np.float64)
    counts = counts.reshape(levels, levels)
    return Glcm(levels, counts / counts.sum(), (dr, dc))


def glcm_stats(g: Glcm) -> GlcmStats:
    """Contrast, correlation, energy, entropy (bits), and homogeneity of a GLCM."""
    p = g.counts
    idx = np.arange(g.levels, dtype=np.float64)
    ii = idx[:, None]
    jj = idx[None, :]
    contrast = float(((ii - jj) ** 2 * p).sum())
    p_i = p.sum(axis=1)
    p_j = p.sum(axis=0)
    mu_i = float((idx * p_i).sum())
    mu_j = float((idx * p_j).sum())
    var_i = float(((idx - mu_i) ** 2 * p_i).sum())
    var_j = float(((idx - mu_j) ** 2 * p_j).sum())
    if var_i <= 0.0 or var_j <= 0.0:
        correlation = 1.0  # perfectly predictable marginals, by convention
    else:
        cov = float((((ii - mu_i) * (jj - mu_j)) * p).sum())
        correlation = cov / float(np.sqrt(var_i * var_j))
    energy = float((p ** 2).sum())
    nz = p[p > 0]
    entropy = float(-(nz * np.log2(nz)).sum())
    homogeneity = float((p / (1.0 + np.abs(ii - jj))).sum())
    return GlcmStats(contrast, correlation, energy, entropy, homogeneity)


def glcm_is_degenerate(g: Glcm) -> bool:
    """True when either marginal has zero variance (correlation convention applies)."""
    idx = np.arange(g.levels, dtype=np.float64)
    for marginal in (g.counts.sum(axis=1), g.counts.sum(axis=0)):
        mu = float((idx * marginal).sum())
        if float(((idx - mu) ** 2 * marginal).sum()) <= 0.0:
            return True
    return False


def contrast_ratio(img: np.ndarray, edges: np.ndarray) -> float | None:
    """Ratio of intensity standard deviation on edge pixels to background pixels.

    Returns ``None`` (undefined) when the edge map is empty or full or when
    either population has zero spread; reports render that as an absent value.
    """
    img = as_image(img)
    bits = as_edge_map(edges)
    if bits.shape != img.shape:
        raise InvalidInputError(f"edge map {bits.shape} does not match image {img.shape}")
    n_edge = int(bits.sum())
    if n_edge == 0 or n_edge == bits.size:
        return None
    sigma_edge = float(img[bits].std())
    sigma_bg = float(img[~bits].std())
    if sigma_edge <= 0.0 or sigma_bg <= 0.0:
        return None
    return sigma_edge / sigma_bg


def reference_correlation(edges: np.ndarray, reference: np.ndarray) -> float | None:
    """Pearson correlation between two same-sized grids over all pixels.

    Returns ``None`` when either grid has zero variance.
    """
    a = as_image(edges, name="edges")
    b = as_image(reference, name="reference")
    if a.shape != b.shape:
        raise InvalidInputError(f"dimensions differ: {a.shape} vs {b.shape}")
    sa = float(a.std())
    sb = float(b.std())
    if sa <= 0.0 or sb <= 0.0:
        return None
    return float(((a - a.mean()) * (b - b.mean())).mean() / (sa * sb))


#: Intensity floor for block ratios; one 8-bit quantization step.
EME_EPSILON = 1.0 / 255.0


def eme(img: np.ndarray, block: tuple[int, int] = (8, 8)) -> float:
    """Mean block contrast measure: 20 * log10(max / min) over tiled blocks.

    The image is tiled into non-overlapping blocks of the given (height,
    width); partial blocks at the edges count too. Block extrema are floored
    at 1/255 so empty blocks contribute zero rather than diverging.
    """
    img = as_image(img)
    bh, bw = int(block[0]), int(block[1])
    if bh < 1 or bw < 1:
        raise InvalidInputError(f"block dimensions must be >= 1, got {block}")
    h, w = img.shape
    total = 0.0
    count = 0
    for r in range(0, h, bh):
        for c in range(0, w, bw):
            tile = img[r:r + bh, c:c + bw]
            ratio = max(float(tile.max()), EME_EPSILON) / max(float(tile.min()), EME_EPSILON)
            total += 20.0 * np.log10(ratio)
            count += 1
    return total / count


# --------------------------------------------------------------------------
# Metrics reports
# --------------------------------------------------------------------------

#: Fixed column order for delimited report output.
CSV_COLUMNS = (
    "image", "method",
    "contrast_orig", "contrast_edge",
    "correlation_orig", "correlation_edge",
    "energy_orig", "energy_edge",
    "entropy_orig", "entropy_edge",
    "homogeneity_orig", "homogeneity_edge",
    "contrast_ratio", "eme", "params",
)


@dataclass
class MetricsReport:
    """Named scalar metrics for one (original image, edge map) pair."""

    image: str
    method: str
    contrast_orig: float
    contrast_edge: float
    correlation_orig: float
    correlation_edge: float
    energy_orig: float
    energy_edge: float
    entropy_orig: float
    entropy_edge: float
    homogeneity_orig: float
    homogeneity_edge: float
    contrast_ratio: float | None
    eme: float
    params: dict = field(default_factory=dict)

    def to_csv_row(self) -> list[str]:
        row = []
        for col in CSV_COLUMNS:
            value = getattr(self, col)
            if col == "params":
                row.append(json.dumps(value, sort_keys=True))
            elif value is None:
                row.append("")
            elif isinstance(value, float):
                row.append(repr(value))
            else:
                row.append(str(value))
        return row

    def to_json_dict(self) -> dict:
        return {col: getattr(self, col) for col in CSV_COLUMNS}


def build_report(image_name: str, method: str, original: np.ndarray,
                 edges: np.ndarray, params: dict | None = None,
                 levels: int = 8, offset: tuple[int, int] = (0, 1),
                 eme_block: tuple[int, int] = (8, 8)) -> MetricsReport:
    """Compute the full metrics row for an (original, edge map) pair.

    GLCM statistics are taken on both grids, the contrast ratio on the
    original under the edge mask, and the block contrast measure on the edge
    map itself. Every effective parameter (including the metric defaults and
    tool version) lands in ``params``.
    """
    original = as_image(original, name="original")
    bits = as_edge_map(edges)
    if bits.shape != original.shape:
        raise InvalidInputError(
            f"edge map {bits.shape} does not match image {original.shape}"
        )
    edge_img = bits.astype(np.float64)
    g_orig = glcm(original, levels, offset)
    g_edge = glcm(edge_img, levels, offset)
    s_orig = glcm_stats(g_orig)
    s_edge = glcm_stats(g_edge)
    record = dict(params or {})
    record.update({
        "glcm_levels": levels,
        "glcm_offset": list(offset),
        "eme_block": list(eme_block),
        "version": __version__,
    })
    degenerate = [name for name, g in (("original", g_orig), ("edge", g_edge))
                  if glcm_is_degenerate(g)]
    if degenerate:
        record["correlation_convention"] = degenerate
    return MetricsReport(
        image=image_name,
        method=method,
        contrast_orig=s_orig.contrast,
        contrast_edge=s_edge.contrast,
        correlation_orig=s_orig.correlation,
        correlation_edge=s_edge.correlation,
        energy_orig=s_orig.energy,
        energy_edge=s_edge.energy,
        entropy_orig=s_orig.entropy,
        entropy_edge=s_edge.entropy,
        homogeneity_orig=s_orig.homogeneity,
        homogeneity_edge=s_edge.homogeneity,
        contrast_ratio=contrast_ratio(original, bits),
        eme=eme(edge_img, eme_block),
        params=record,
    )


def write_reports_csv(path: str | os.PathLike, reports: list[MetricsReport],
                      times_ms: list[float] | None = None) -> None:
    """Write reports as RFC-4180 CSV; optional per-row timing column at the end."""
    header = list(CSV_COLUMNS) + (["time_ms"] if times_ms is not None else [])
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i, rep in enumerate(reports):
            row = rep.to_csv_row()
            if times_ms is not None:
                row.append(f"{times_ms[i]:.3f}")
            writer.writerow(row)


def write_reports_json(path: str | os.PathLike, reports: list[MetricsReport]) -> None:
    """Write reports as a single JSON array of objects."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump([rep.to_json_dict() for rep in reports], fh, indent=2, sort_keys=True)
        fh.write("\n")
