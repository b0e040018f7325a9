"""Raster data model, file IO, and sliding-window statistics.

A "plane" throughout this package is a C-contiguous float64 numpy array of
shape (height, width) holding intensities nominally in [0, 1].  Color images
are three aligned planes.  Every windowed operation in the package uses
replicate padding at the borders.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import cv2
import numpy as np

__all__ = [
    "ColorImage",
    "LocalStats",
    "as_plane",
    "box_mean",
    "clamp01",
    "invert",
    "load_image",
    "local_stats",
    "max_channel",
    "save_image",
]


def as_plane(data) -> np.ndarray:
    """Coerce array-like data to a C-contiguous float64 plane."""
    arr = np.ascontiguousarray(data, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"plane must be 2-D and non-empty, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("plane contains non-finite values")
    return arr


@dataclass(frozen=True)
class ColorImage:
    """Three aligned single-channel planes (R, G, B)."""

    r: np.ndarray
    g: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        if not (self.r.shape == self.g.shape == self.b.shape):
            raise ValueError("channel planes must share dimensions")

    @property
    def height(self) -> int:
        return self.r.shape[0]

    @property
    def width(self) -> int:
        return self.r.shape[1]

    @property
    def planes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.r, self.g, self.b)

    @classmethod
    def from_planes(cls, r, g, b) -> "ColorImage":
        return cls(as_plane(r), as_plane(g), as_plane(b))

    @classmethod
    def from_gray(cls, plane) -> "ColorImage":
        p = as_plane(plane)
        return cls(p, p.copy(), p.copy())

    def to_array(self) -> np.ndarray:
        """Stack channels into an (h, w, 3) RGB array."""
        return np.stack(self.planes, axis=-1)

    def is_gray(self) -> bool:
        return bool(np.array_equal(self.r, self.g) and np.array_equal(self.g, self.b))


@dataclass(frozen=True)
class LocalStats:
    """Windowed mean and population variance at a fixed square radius."""

    mean: np.ndarray
    variance: np.ndarray
    radius: int


def clamp01(x: np.ndarray) -> np.ndarray:
    return np.clip(x, 0.0, 1.0)


def load_image(path) -> ColorImage:
    """Load a PNG or JPEG file into normalized [0, 1] planes.

    8-bit samples map to v/255, 16-bit to v/65535.  Grayscale files yield
    three equal planes; an alpha channel, if present, is dropped.
    """
    path = os.fspath(path)
    if not os.path.isfile(path):
        raise FileNotFoundError(path)
    raw = cv2.imread(path, cv2.IMREAD_UNCHANGED)
    if raw is None:
        raise ValueError(f"unsupported or unreadable raster file: {path}")
    if raw.ndim not in (2, 3) or raw.shape[0] < 1 or raw.shape[1] < 1:
        raise ValueError(f"degenerate image dimensions in {path}")
    if raw.dtype == np.uint8:
        scale = 255.0
    elif raw.dtype == np.uint16:
        scale = 65535.0
    else:
        raise ValueError(f"unsupported sample type {raw.dtype} in {path}")
    data = raw.astype(np.float64) / scale
    if data.ndim == 2:
        return ColorImage.from_gray(data)
    if data.shape[2] == 4:  # BGRA -> drop alpha
        data = data[:, :, :3]
    if data.shape[2] != 3:
        raise ValueError(f"unsupported channel count {data.shape[2]} in {path}")
    b, g, r = data[:, :, 0], data[:, :, 1], data[:, :, 2]
    return ColorImage.from_planes(r, g, b)


def _quantize(x: np.ndarray, depth: int) -> np.ndarray:
    if depth == 8:
        full, dtype = 255.0, np.uint8
    elif depth == 16:
        full, dtype = 65535.0, np.uint16
    else:
        raise ValueError("depth must be 8 or 16")
    # round-to-nearest with half-up ties
    return np.floor(clamp01(x) * full + 0.5).astype(dtype)


def save_image(img, path, depth: int = 8) -> None:
    """Write a plane or ColorImage as PNG, clamped to [0, 1] then quantized."""
    path = os.fspath(path)
    if os.path.splitext(path)[1].lower() != ".png":
        raise ValueError("only PNG output is supported (JPEG is read-only)")
    if isinstance(img, ColorImage):
        rgb = img.to_array()
        if not np.all(np.isfinite(rgb)):
            raise ValueError("image contains non-finite values")
        out = _quantize(rgb, depth)[:, :, ::-1]  # RGB -> BGR
    else:
        plane = as_plane(img)
        out = _quantize(plane, depth)
    if not cv2.imwrite(path, out):
        raise OSError(f"could not write {path}")


def invert(x):
    """Photographic negative: 1 - x, plane-wise."""
    if isinstance(x, ColorImage):
        return ColorImage(1.0 - x.r, 1.0 - x.g, 1.0 - x.b)
    return 1.0 - as_plane(x)


def max_channel(img: ColorImage) -> np.ndarray:
    """Per-pixel maximum over the three channels."""
    return np.maximum(np.maximum(img.r, img.g), img.b)


def _window_sums(padded: np.ndarray, radius: int) -> np.ndarray:
    """Sums over (2*radius+1)^2 windows of an already-padded plane."""
    sat = np.zeros((padded.shape[0] + 1, padded.shape[1] + 1), dtype=np.float64)
    np.cumsum(padded, axis=0, out=sat[1:, 1:])
    np.cumsum(sat[1:, 1:], axis=1, out=sat[1:, 1:])
    k = 2 * radius + 1
    return (
        sat[k:, k:] - sat[:-k, k:] - sat[k:, :-k] + sat[:-k, :-k]
    )


def box_mean(x: np.ndarray, radius: int) -> np.ndarray:
    """Mean over the square window at each pixel, replicate-padded borders.

    Computed with a summed-area table, so the cost does not grow with the
    radius.
    """
    if radius < 1:
        raise ValueError("radius must be >= 1")
    x = as_plane(x)
    padded = np.pad(x, radius, mode="edge")
    n = float((2 * radius + 1) ** 2)
    return _window_sums(padded, radius) / n


def local_stats(x: np.ndarray, radius: int) -> LocalStats:
    """Windowed mean and population variance (divide by N) at each pixel."""
    if radius < 1:
        raise ValueError("radius must be >= 1")
    x = as_plane(x)
    padded = np.pad(x, radius, mode="edge")
    n = float((2 * radius + 1) ** 2)
    mean = _window_sums(padded, radius) / n
    mean_sq = _window_sums(padded * padded, radius) / n
    variance = np.maximum(mean_sq - mean * mean, 0.0)
    return LocalStats(mean=mean, variance=variance, radius=radius)
