"""Tropical (min-plus / max-plus) edge detection toolkit.

Library layout:

    image_core   image/kernel carriers, padding, resizing, normalization, I/O
    tropical     min-plus / max-plus convolution, tropical gradient, kernel banks
    preprocess   bilateral filter, shock filter, multi-scale pairs
    enhance      Hessian weighting, shrinkage, thresholds, thinning, area filter
    operators    Roberts/Prewitt/Sobel/LoG/Canny and their tropical variants
    metrics      GLCM statistics, contrast ratio, block contrast measure, reports
    pipelines    named end-to-end variants and multi-method comparisons
    cli          command-line front end (detect / compare / bench / metrics)
"""

from ._version import __version__
from .enhance import (HessianResponse, ThresholdParams, adaptive_threshold,
                      area_filter, gaussian_kernel, hessian_enhance,
                      hessian_filter, otsu_threshold, thin, wavelet_shrink)
from .errors import InvalidInputError, UndefinedMetricError
from .image_core import (load_image, normalize, pad, resize, resize_to,
                         save_image, to_grayscale)
from .metrics import (Glcm, GlcmStats, MetricsReport, build_report,
                      contrast_ratio, eme, glcm, glcm_stats,
                      reference_correlation, write_reports_csv,
                      write_reports_json)
from .operators import (CannyParams, GradientPair, canny_detect,
                        classical_gradient, gradient_magnitude, log_detect,
                        log_kernel, tg_canny_detect, tg_gradient_detect,
                        tg_log_detect)
from .pipelines import (METHOD_NAMES, OPERATOR_NAMES, PIPELINE_NAMES,
                        PipelineResult, PipelineSpec, read_pipeline_specs,
                        run_comparison, run_pipeline, write_pipeline_specs)
from .preprocess import (BilateralParams, ScalePair, ShockParams,
                         bilateral_filter, make_scale_pair, merge_scales,
                         shock_filter)
from .samples import SAMPLE_NAMES, sample_image, write_sample_images
from .tropical import (KernelBank, classical_convolve, directional6,
                       directional8, fuse_bank, get_bank, hessian4,
                       load_kernel_bank, tropical_convolve, tropical_gradient)

__all__ = [
    "__version__",
    "InvalidInputError", "UndefinedMetricError",
    "load_image", "save_image", "to_grayscale", "pad", "resize", "resize_to",
    "normalize",
    "classical_convolve", "tropical_convolve", "tropical_gradient", "fuse_bank",
    "KernelBank", "get_bank", "directional6", "directional8", "hessian4",
    "load_kernel_bank",
    "BilateralParams", "ShockParams", "ScalePair", "bilateral_filter",
    "shock_filter", "make_scale_pair", "merge_scales",
    "HessianResponse", "ThresholdParams", "hessian_filter", "hessian_enhance",
    "wavelet_shrink", "adaptive_threshold", "otsu_threshold", "thin",
    "area_filter", "gaussian_kernel",
    "GradientPair", "CannyParams", "classical_gradient", "gradient_magnitude",
    "log_kernel", "log_detect", "canny_detect", "tg_gradient_detect",
    "tg_log_detect", "tg_canny_detect",
    "Glcm", "GlcmStats", "MetricsReport", "glcm", "glcm_stats",
    "contrast_ratio", "reference_correlation", "eme", "build_report",
    "write_reports_csv", "write_reports_json",
    "PipelineSpec", "PipelineResult", "PIPELINE_NAMES", "OPERATOR_NAMES",
    "METHOD_NAMES", "run_pipeline", "run_comparison", "read_pipeline_specs",
    "write_pipeline_specs",
    "SAMPLE_NAMES", "sample_image", "write_sample_images",
]
