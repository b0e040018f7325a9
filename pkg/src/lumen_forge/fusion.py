"""Multi-exposure fusion, color reattachment, stretching, and the full
enhancement pipeline.

The two Retinex channel outputs are fused with the original luminance via a
Laplacian-pyramid blend weighted by local contrast and well-exposedness; the
fused luminance is recolored with illumination-normalized channel ratios and
linearly stretched to fill [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import PipelineConfig
from .image_core import ColorImage, as_plane, clamp01, invert
from .retinex import compose_channels

__all__ = [
    "FusionStack",
    "dehaze",
    "enhance",
    "exposure_fusion",
    "linear_stretch",
    "recolor",
]

_WEIGHT_EPS = 1e-12
_WELL_EXPOSED_SIGMA = 0.2
_STRETCH_EPS = 1e-12

_BLUR_TAPS = np.array([1.0, 4.0, 6.0, 4.0, 1.0]) / 16.0


def _blur5(x: np.ndarray) -> np.ndarray:
    """Separable 5-tap binomial blur with replicate padding."""
    p = np.pad(x, ((2, 2), (0, 0)), mode="edge")
    out = np.zeros_like(x)
    for k in range(5):
        out += _BLUR_TAPS[k] * p[k : k + x.shape[0], :]
    p = np.pad(out, ((0, 0), (2, 2)), mode="edge")
    out = np.zeros_like(x)
    for k in range(5):
        out += _BLUR_TAPS[k] * p[:, k : k + x.shape[1]]
    return out


def _downsample(x: np.ndarray) -> np.ndarray:
    return _blur5(x)[0::2, 0::2]


def _upsample(x: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    z = np.zeros(shape, dtype=np.float64)
    z[0::2, 0::2] = x
    return _blur5(z) * 4.0


def pyramid_depth(height: int, width: int) -> int:
    return max(1, int(math.floor(math.log2(min(height, width)))) - 1)


def _gaussian_pyramid(x: np.ndarray, depth: int) -> list[np.ndarray]:
    levels = [x]
    for _ in range(depth - 1):
        levels.append(_downsample(levels[-1]))
    return levels


def _laplacian_pyramid(x: np.ndarray, depth: int) -> list[np.ndarray]:
    gauss = _gaussian_pyramid(x, depth)
    levels = [
        gauss[i] - _upsample(gauss[i + 1], gauss[i].shape) for i in range(depth - 1)
    ]
    levels.append(gauss[-1])
    return levels


def _contrast(x: np.ndarray) -> np.ndarray:
    p = np.pad(x, 1, mode="edge")
    lap = (
        p[:-2, 1:-1] + p[2:, 1:-1] + p[1:-1, :-2] + p[1:-1, 2:] - 4.0 * x
    )
    return np.abs(lap)


def _well_exposedness(x: np.ndarray) -> np.ndarray:
    d = x - 0.5
    return np.exp(-(d * d) / (2.0 * _WELL_EXPOSED_SIGMA**2))


@dataclass(frozen=True)
class FusionStack:
    """Aligned frames with pixel-wise normalized blending weights."""

    frames: tuple[np.ndarray, ...]
    weights: tuple[np.ndarray, ...]

    @classmethod
    def from_frames(cls, frames: Sequence[np.ndarray]) -> "FusionStack":
        planes = tuple(as_plane(f) for f in frames)
        if len(planes) < 2:
            raise ValueError("need at least two frames to fuse")
        if any(p.shape != planes[0].shape for p in planes):
            raise ValueError("fusion frames must share dimensions")
        # contrast modulates the exposedness weight; the +1 keeps flat
        # (zero-Laplacian) regions driven by well-exposedness alone
        raw = [
            (1.0 + _contrast(p)) * _well_exposedness(p) + _WEIGHT_EPS for p in planes
        ]
        total = raw[0].copy()
        for r in raw[1:]:
            total += r
        return cls(frames=planes, weights=tuple(r / total for r in raw))


def exposure_fusion(stack: FusionStack | Sequence[np.ndarray]) -> np.ndarray:
    """Laplacian-pyramid blend of the stack, clamped to [0, 1]."""
    if not isinstance(stack, FusionStack):
        stack = FusionStack.from_frames(stack)
    h, w = stack.frames[0].shape
    depth = pyramid_depth(h, w)
    fused_levels: list[np.ndarray] | None = None
    for frame, weight in zip(stack.frames, stack.weights):
        lap = _laplacian_pyramid(frame, depth)
        gw = _gaussian_pyramid(weight, depth)
        contrib = [l * g for l, g in zip(lap, gw)]
        if fused_levels is None:
            fused_levels = contrib
        else:
            fused_levels = [f + c for f, c in zip(fused_levels, contrib)]
    assert fused_levels is not None
    out = fused_levels[-1]
    for lvl in reversed(fused_levels[:-1]):
        out = lvl + _upsample(out, lvl.shape)
    return clamp01(out)


def recolor(fused: np.ndarray, original: ColorImage, lum: np.ndarray, tau_r: float) -> ColorImage:
    """Reattach color: each channel is fused times its illumination ratio."""
    fused = as_plane(fused)
    lum = as_plane(lum)
    den = lum + tau_r
    channels = [clamp01(fused * (c / den)) for c in original.planes]
    return ColorImage(*channels)


def linear_stretch(x):
    """Affine remap to full [0, 1] range using the joint min/max.

    Returns (stretched, degenerate): constant inputs pass through unchanged
    with the degenerate flag set.  For color images the min/max are taken
    jointly over all channels, preserving hue ratios.
    """
    if isinstance(x, ColorImage):
        arr = x.to_array()
        lo, hi = float(arr.min()), float(arr.max())
        if hi - lo < _STRETCH_EPS:
            return x, True
        span = hi - lo
        return ColorImage(*((p - lo) / span for p in x.planes)), False
    plane = as_plane(x)
    lo, hi = float(plane.min()), float(plane.max())
    if hi - lo < _STRETCH_EPS:
        return plane, True
    return (plane - lo) / (hi - lo), False


def enhance(img, cfg: PipelineConfig | None = None) -> ColorImage:
    """Full pipeline: dual Retinex correction, 3-frame fusion, recolor,
    linear stretch.  Grayscale planes are treated as gray color images."""
    cfg = cfg or PipelineConfig()
    if not isinstance(img, ColorImage):
        img = ColorImage.from_gray(img)
    channels = compose_channels(img, cfg)
    fused = exposure_fusion([channels.qf, channels.qr, channels.lum])
    colored = recolor(fused, img, channels.lum, cfg.tau_r)
    stretched, _ = linear_stretch(colored)
    return stretched


def dehaze(img, cfg: PipelineConfig | None = None) -> ColorImage:
    """Haze removal: enhance the photographic negative, then invert back."""
    if not isinstance(img, ColorImage):
        img = ColorImage.from_gray(img)
    return invert(enhance(invert(img), cfg))
