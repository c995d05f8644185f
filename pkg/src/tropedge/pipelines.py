"""Named end-to-end detection pipelines and multi-method comparison runs.

Each named variant shares one processing chain -- grayscale, bilateral filter,
shock filter, dual-scale tropical response, scale fusion, normalization,
curvature weighting, shrinkage boost, threshold, thinning, area filter -- and
differs only in kernel bank, semiring, and threshold rule:

    adapt-thresh-min   directional8, min-plus, adaptive window-mean threshold
    8k-min             directional8, min-plus, Otsu threshold
    6k-max             directional6, max-plus, Otsu threshold
    4k-max             hessian4,     max-plus, Otsu threshold
    random-max         hessian4,     max-plus, fixed threshold ~ U[0.3, 0.7]
                       drawn from the run seed

Min-plus responses mark edges with large negative values, so they are
sign-inverted into edge strengths before scales are fused by element-wise max;
max-plus responses are used as is.
"""

from __future__ import annotations

import configparser
import os
import time
from dataclasses import dataclass

import numpy as np

from .enhance import (ThresholdParams, adaptive_threshold, area_filter,
                      hessian_enhance, hessian_filter, thin, wavelet_shrink)
from .errors import InvalidInputError
from .image_core import as_image, normalize, resize_to, to_grayscale
from .metrics import MetricsReport, build_report
from .operators import (TG_CANNY_THRESHOLD, CannyParams, binarize_response,
                        canny_detect, classical_gradient, gradient_magnitude,
                        log_detect, tg_canny_detect, tg_gradient_detect,
                        tg_log_detect)
from .preprocess import (BilateralParams, ScalePair, ShockParams,
                         bilateral_filter, make_scale_pair, merge_scales,
                         shock_filter)
from .tropical import KernelBank, Semiring, fuse_bank, get_bank

PIPELINE_NAMES = ("adapt-thresh-min", "8k-min", "6k-max", "4k-max", "random-max")

OPERATOR_NAMES = ("roberts", "prewitt", "sobel", "log", "canny",
                  "tg-roberts", "tg-prewitt", "tg-sobel", "tg-log", "tg-canny")

METHOD_NAMES = PIPELINE_NAMES + OPERATOR_NAMES

_PIPELINE_BANK = {
    "adapt-thresh-min": "directional8",
    "8k-min": "directional8",
    "6k-max": "directional6",
    "4k-max": "hessian4",
    "random-max": "hessian4",
}

_PIPELINE_SEMIRING: dict[str, Semiring] = {
    "adapt-thresh-min": "min-plus",
    "8k-min": "min-plus",
    "6k-max": "max-plus",
    "4k-max": "max-plus",
    "random-max": "max-plus",
}

#: Input dimensions (height, width) applied by the paper-protocol switch.
PROTOCOL_DIMS = (300, 400)

#: A merged response whose spread is below this is treated as featureless.
_FLAT_RESPONSE_TOL = 1e-9


@dataclass(frozen=True)
class PipelineSpec:
    """Full parameterization of one named pipeline variant.

    ``threshold=None`` selects the variant's default rule; ``random-max``
    requires a ``seed`` so its drawn threshold is reproducible.
    """

    name: str
    bilateral: BilateralParams = BilateralParams()
    shock: ShockParams = ShockParams()
    scales: ScalePair = ScalePair()
    threshold: ThresholdParams | None = None
    use_hessian: bool = True
    use_wavelet: bool = True
    use_thinning: bool = True
    use_area_filter: bool = True
    min_area: int = 8
    hessian_sigma: float = 1.0
    seed: int | None = None

    def __post_init__(self):
        if self.name not in PIPELINE_NAMES:
            raise InvalidInputError(
                f"unknown pipeline {self.name!r}; valid names: {PIPELINE_NAMES}"
            )
        if self.name == "random-max" and self.seed is None and self.threshold is None:
            raise InvalidInputError("random-max requires a seed")
        if self.min_area < 0:
            raise InvalidInputError(f"min_area must be >= 0, got {self.min_area}")
        if self.hessian_sigma < 0:
            raise InvalidInputError(f"hessian_sigma must be >= 0, got {self.hessian_sigma}")


@dataclass
class PipelineResult:
    """Edge map, intermediate grids, per-scale raw responses, and metrics."""

    method: str
    edge_map: np.ndarray
    intermediate: dict[str, np.ndarray]
    scale_responses: dict[float, np.ndarray]
    report: MetricsReport
    elapsed_ms: float = 0.0


def resolve_threshold(spec: PipelineSpec) -> ThresholdParams:
    """The effective threshold rule for a spec (variant default when unset)."""
    if spec.threshold is not None:
        return spec.threshold
    if spec.name == "adapt-thresh-min":
        return ThresholdParams(mode="adaptive-mean")
    if spec.name == "random-max":
        drawn = float(np.random.default_rng(spec.seed).uniform(0.3, 0.7))
        return ThresholdParams(mode="fixed", value=drawn)
    return ThresholdParams(mode="otsu")


def effective_params(spec: PipelineSpec, threshold: ThresholdParams,
                     bank_name: str) -> dict:
    """Complete key-value record of every parameter a run used."""
    return {
        "pipeline": spec.name,
        "bank": bank_name,
        "semiring": _PIPELINE_SEMIRING[spec.name],
        "bilateral_sigma_spatial": spec.bilateral.sigma_spatial,
        "bilateral_sigma_range": spec.bilateral.sigma_range,
        "bilateral_radius": spec.bilateral.radius,
        "shock_strength": spec.shock.strength,
        "shock_iterations": spec.shock.iterations,
        "scale_small": spec.scales.small,
        "scale_large": spec.scales.large,
        "threshold_mode": threshold.mode,
        "threshold_window": threshold.window,
        "threshold_offset": threshold.offset,
        "threshold_value": threshold.value,
        "use_hessian": spec.use_hessian,
        "use_wavelet": spec.use_wavelet,
        "use_thinning": spec.use_thinning,
        "use_area_filter": spec.use_area_filter,
        "min_area": spec.min_area,
        "hessian_sigma": spec.hessian_sigma,
        "seed": spec.seed,
    }


def preprocess_image(img: np.ndarray, bilateral: BilateralParams = BilateralParams(),
                     shock: ShockParams = ShockParams(),
                     paper_protocol: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Shared front end: grayscale (if color), optional protocol resize,
    bilateral filter, shock filter. Returns (grayscale, preprocessed)."""
    arr = np.asarray(img, dtype=np.float64)
    gray = to_grayscale(arr) if arr.ndim == 3 else as_image(arr)
    if paper_protocol:
        gray = resize_to(gray, PROTOCOL_DIMS)
    pre = shock_filter(bilateral_filter(gray, bilateral), shock)
    return gray, pre


def _tropical_stage(pre: np.ndarray, spec: PipelineSpec,
                    bank: KernelBank | None) -> tuple[np.ndarray, dict[float, np.ndarray]]:
    """Dual-scale tropical response; returns (merged strength, raw per-scale responses)."""
    bank = bank if bank is not None else get_bank(_PIPELINE_BANK[spec.name])
    semiring = _PIPELINE_SEMIRING[spec.name]
    small, large = make_scale_pair(pre, spec.scales)
    raw: dict[float, np.ndarray] = {}
    strengths = []
    for factor, scaled in ((spec.scales.small, small), (spec.scales.large, large)):
        fused = fuse_bank(scaled, bank, semiring)
        raw[factor] = fused
        strengths.append(-fused if semiring == "min-plus" else fused)
    merged = merge_scales(strengths, pre.shape)
    return merged, raw


def detect_edges(pre: np.ndarray, spec: PipelineSpec,
                 bank: KernelBank | None = None
                 ) -> tuple[np.ndarray, dict[str, np.ndarray], dict[float, np.ndarray]]:
    """Run the post-preprocessing stages of a pipeline on a prepared image.

    Returns (edge map, intermediates, per-scale raw responses). A merged
    response with no spread means the input has no intensity transitions, in
    which case the edge map is empty by definition.
    """
    pre = as_image(pre, name="preprocessed")
    merged, raw = _tropical_stage(pre, spec, bank)
    threshold = resolve_threshold(spec)
    if float(merged.max() - merged.min()) <= _FLAT_RESPONSE_TOL:
        enhanced = np.zeros_like(merged)
        edges = np.zeros(pre.shape, dtype=bool)
    else:
        enhanced = normalize(merged)
        if spec.use_hessian:
            enhanced = hessian_enhance(enhanced, hessian_filter(pre, spec.hessian_sigma))
        if spec.use_wavelet:
            enhanced = normalize(enhanced + wavelet_shrink(enhanced))
        edges = adaptive_threshold(enhanced, threshold)
        if spec.use_thinning:
            edges = thin(edges)
        if spec.use_area_filter:
            edges = area_filter(edges, spec.min_area)
    intermediate = {"preprocessed": pre, "response": merged, "enhanced": enhanced}
    return edges, intermediate, raw


def run_pipeline(img: np.ndarray, spec: PipelineSpec, *, image_name: str = "image",
                 bank: KernelBank | None = None,
                 paper_protocol: bool = False) -> PipelineResult:
    """Execute one named pipeline end to end and compute its metrics report."""
    start = time.perf_counter()
    gray, pre = preprocess_image(img, spec.bilateral, spec.shock, paper_protocol)
    edges, intermediate, raw = detect_edges(pre, spec, bank)
    threshold = resolve_threshold(spec)
    bank_name = bank.name if bank is not None else _PIPELINE_BANK[spec.name]
    params = effective_params(spec, threshold, bank_name)
    params["paper_protocol"] = paper_protocol
    report = build_report(image_name, spec.name, gray, edges, params)
    elapsed = (time.perf_counter() - start) * 1000.0
    return PipelineResult(spec.name, edges, intermediate, raw, report, elapsed)


def _run_operator(pre: np.ndarray, method: str, canny: CannyParams,
                  threshold: ThresholdParams, log_sigma: float,
                  fixed_threshold: float | None) -> tuple[np.ndarray, dict[str, np.ndarray]]:
    if method in ("roberts", "prewitt", "sobel"):
        resp = normalize(gradient_magnitude(classical_gradient(pre, method)))
        return binarize_response(resp, fixed_threshold), {"response": resp}
    if method == "log":
        resp = log_detect(pre, log_sigma)
        return resp > 0, {"response": resp}
    if method == "canny":
        return canny_detect(pre, canny), {}
    if method in ("tg-roberts", "tg-prewitt", "tg-sobel"):
        resp = tg_gradient_detect(pre, method[3:])
        return binarize_response(resp, fixed_threshold), {"response": resp}
    if method == "tg-log":
        resp = tg_log_detect(pre, log_sigma)
        return binarize_response(resp, fixed_threshold), {"response": resp}
    if method == "tg-canny":
        return tg_canny_detect(pre, canny, threshold), {}
    raise InvalidInputError(f"unknown method {method!r}")


def run_comparison(img: np.ndarray, methods: list[str], *, image_name: str = "image",
                   seed: int | None = 0,
                   bilateral: BilateralParams = BilateralParams(),
                   shock: ShockParams = ShockParams(),
                   scales: ScalePair = ScalePair(),
                   threshold: ThresholdParams | None = None,
                   canny: CannyParams = CannyParams(),
                   log_sigma: float = 1.4,
                   fixed_threshold: float | None = None,
                   bank: KernelBank | None = None,
                   paper_protocol: bool = False) -> list[PipelineResult]:
    """Run several methods (pipelines and operators) on one shared preprocessed input.

    Unknown method names raise :class:`InvalidInputError` before any work is
    done; results come back in input order with per-method wall-clock timings.
    """
    if not methods:
        raise InvalidInputError("no methods given")
    for m in methods:
        if m not in METHOD_NAMES:
            raise InvalidInputError(f"unknown method {m!r}; valid: {METHOD_NAMES}")
    gray, pre = preprocess_image(img, bilateral, shock, paper_protocol)
    op_threshold = threshold if threshold is not None else TG_CANNY_THRESHOLD
    results = []
    for method in methods:
        start = time.perf_counter()
        if method in PIPELINE_NAMES:
            spec = PipelineSpec(method, bilateral=bilateral, shock=shock,
                                scales=scales, threshold=threshold, seed=seed)
            edges, intermediate, raw = detect_edges(pre, spec, bank)
            eff = resolve_threshold(spec)
            bank_name = bank.name if bank is not None else _PIPELINE_BANK[method]
            params = effective_params(spec, eff, bank_name)
        else:
            edges, intermediate = _run_operator(pre, method, canny, op_threshold,
                                                log_sigma, fixed_threshold)
            intermediate = {"preprocessed": pre, **intermediate}
            raw = {}
            params = {
                "operator": method,
                "canny_sigma": canny.sigma,
                "canny_low": canny.low,
                "canny_high": canny.high,
                "log_sigma": log_sigma,
                "fixed_threshold": fixed_threshold,
                "threshold_window": op_threshold.window,
                "threshold_offset": op_threshold.offset,
                "bilateral_sigma_spatial": bilateral.sigma_spatial,
                "bilateral_sigma_range": bilateral.sigma_range,
                "bilateral_radius": bilateral.radius,
                "shock_strength": shock.strength,
                "shock_iterations": shock.iterations,
            }
        intermediate = {"grayscale": gray, **intermediate}
        params["paper_protocol"] = paper_protocol
        report = build_report(image_name, method, gray, edges, params)
        elapsed = (time.perf_counter() - start) * 1000.0
        results.append(PipelineResult(method, edges, intermediate, raw, report, elapsed))
    return results


# --------------------------------------------------------------------------
# Plain-text (INI) round-trip for pipeline specs
# --------------------------------------------------------------------------

def write_pipeline_specs(path: str | os.PathLike, specs: list[PipelineSpec]) -> None:
    """Write specs as one INI section per pipeline (key = value lines)."""
    cp = configparser.ConfigParser()
    for spec in specs:
        section = {
            "bilateral_sigma_spatial": repr(spec.bilateral.sigma_spatial),
            "bilateral_sigma_range": repr(spec.bilateral.sigma_range),
            "bilateral_radius": str(spec.bilateral.radius),
            "shock_strength": repr(spec.shock.strength),
            "shock_iterations": str(spec.shock.iterations),
            "scale_small": repr(spec.scales.small),
            "scale_large": repr(spec.scales.large),
            "use_hessian": str(spec.use_hessian),
            "use_wavelet": str(spec.use_wavelet),
            "use_thinning": str(spec.use_thinning),
            "use_area_filter": str(spec.use_area_filter),
            "min_area": str(spec.min_area),
            "hessian_sigma": repr(spec.hessian_sigma),
        }
        if spec.threshold is not None:
            section["threshold_mode"] = spec.threshold.mode
            section["threshold_window"] = str(spec.threshold.window)
            section["threshold_offset"] = repr(spec.threshold.offset)
            section["threshold_value"] = repr(spec.threshold.value)
        if spec.seed is not None:
            section["seed"] = str(spec.seed)
        cp[spec.name] = section
    with open(path, "w", encoding="utf-8") as fh:
        cp.write(fh)


def read_pipeline_specs(path: str | os.PathLike) -> list[PipelineSpec]:
    """Read pipeline specs from an INI file written by :func:`write_pipeline_specs`."""
    cp = configparser.ConfigParser()
    read = cp.read(os.fspath(path), encoding="utf-8")
    if not read:
        raise InvalidInputError(f"cannot read pipeline config {path}")
    specs = []
    for name in cp.sections():
        sec = cp[name]
        threshold = None
        if "threshold_mode" in sec:
            threshold = ThresholdParams(
                mode=sec.get("threshold_mode"),
                window=sec.getint("threshold_window", 15),
                offset=sec.getfloat("threshold_offset", -0.02),
                value=sec.getfloat("threshold_value", 0.5),
            )
        specs.append(PipelineSpec(
            name=name,
            bilateral=BilateralParams(
                sigma_spatial=sec.getfloat("bilateral_sigma_spatial", 2.0),
                sigma_range=sec.getfloat("bilateral_sigma_range", 0.1),
                radius=sec.getint("bilateral_radius", 3),
            ),
            shock=ShockParams(
                strength=sec.getfloat("shock_strength", 0.3),
                iterations=sec.getint("shock_iterations", 5),
            ),
            scales=ScalePair(
                small=sec.getfloat("scale_small", 0.5),
                large=sec.getfloat("scale_large", 1.5),
            ),
            threshold=threshold,
            use_hessian=sec.getboolean("use_hessian", True),
            use_wavelet=sec.getboolean("use_wavelet", True),
            use_thinning=sec.getboolean("use_thinning", True),
            use_area_filter=sec.getboolean("use_area_filter", True),
            min_area=sec.getint("min_area", 8),
            hessian_sigma=sec.getfloat("hessian_sigma", 1.0),
            seed=sec.getint("seed") if "seed" in sec else None,
        ))
    return specs
