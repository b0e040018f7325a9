"""Deterministic image enhancement and noise suppression.

Gradient-domain weighted guided filtering with adaptive oriented windows,
dual-illumination Retinex correction, multi-exposure fusion, and a
synthetic-degradation evaluation harness.
"""

from ._backend import COMPILED, backend_name
from .adaptive_window import (
    AdaptiveWindow,
    WindowedGradients,
    init_window,
    oriented_filter,
    refine_window,
    window_gradient_sums,
)
from .config import PipelineConfig
from .edge_gradient import (
    EdgeAwareGradient,
    EdgeClassMap,
    GradientField,
    classify_edges,
    compute_gradients,
    denoise_gradients,
    edge_aware_gradient,
)
from .fusion import FusionStack, dehaze, enhance, exposure_fusion, linear_stretch, recolor
from .gdwgif import EdgeWeightMaps, FilterParams, chi_map, edge_aware_weight, gdwgif, psi_map
from .harness import DegradeSpec, QualityReport, degrade, evaluate_directory, psnr, ssim
from .image_core import (
    ColorImage,
    LocalStats,
    invert,
    load_image,
    local_stats,
    max_channel,
    save_image,
)
from .retinex import (
    ChannelOutputs,
    IlluminationPair,
    ReflectionPair,
    compose_channels,
    correct_illumination,
    denoise_reflection,
    dual_illumination,
    estimate_illumination,
    extract_reflection,
)

__version__ = "0.1.0"

__all__ = [
    "AdaptiveWindow",
    "COMPILED",
    "ChannelOutputs",
    "ColorImage",
    "DegradeSpec",
    "EdgeAwareGradient",
    "EdgeClassMap",
    "EdgeWeightMaps",
    "FilterParams",
    "FusionStack",
    "GradientField",
    "IlluminationPair",
    "LocalStats",
    "PipelineConfig",
    "QualityReport",
    "ReflectionPair",
    "WindowedGradients",
    "backend_name",
    "chi_map",
    "classify_edges",
    "compose_channels",
    "compute_gradients",
    "correct_illumination",
    "degrade",
    "dehaze",
    "denoise_gradients",
    "denoise_reflection",
    "dual_illumination",
    "edge_aware_gradient",
    "edge_aware_weight",
    "enhance",
    "estimate_illumination",
    "evaluate_directory",
    "exposure_fusion",
    "extract_reflection",
    "gdwgif",
    "init_window",
    "invert",
    "linear_stretch",
    "load_image",
    "local_stats",
    "max_channel",
    "oriented_filter",
    "psi_map",
    "psnr",
    "recolor",
    "refine_window",
    "save_image",
    "ssim",
    "window_gradient_sums",
]
