"""Per-pixel oriented rectangular filtering windows.

Edge pixels get a rectangle whose long axis runs along the edge: the aspect
ratio starts from the pixel's gradients, then is refined from windowed
gradient sums until the ratio settles.  A Gaussian (or median) mean over the
final rectangle replaces the pixel value; everything else passes through.

The batch pass over a whole plane is the package's hot loop and lives in a
compiled kernel with a pure-Python twin (see ``_backend``).  The functions
here are the scalar reference implementation; the kernels mirror their
operation order exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .edge_gradient import EdgeAwareGradient, GradientField
from .image_core import as_plane

__all__ = [
    "AdaptiveWindow",
    "WindowedGradients",
    "init_window",
    "oriented_filter",
    "refine_window",
    "window_gradient_sums",
]

DEN_FLOOR = 1e-6  # clamp for the +1-offset aspect denominators
TAU_TOL = 0.01
MAX_ITERS = 10


@dataclass(frozen=True)
class AdaptiveWindow:
    """Oriented rectangle: odd length along the edge, odd width across it.

    ``theta`` is the window normal (the gradient direction) in radians.
    """

    row: int
    col: int
    length: int
    width: int
    theta: float
    tau: float
    iterations: int

    def __post_init__(self):
        for d in (self.length, self.width):
            if d < 1 or d % 2 == 0:
                raise ValueError("window dimensions must be odd and >= 1")

    @property
    def theta_degrees(self) -> float:
        return math.degrees(self.theta)


@dataclass(frozen=True)
class WindowedGradients:
    """Signed and absolute gradient sums over one window."""

    sum_x: float
    sum_y: float
    abs_sum_x: float
    abs_sum_y: float


def _safe_den(d: float) -> float:
    if abs(d) >= DEN_FLOOR:
        return d
    return DEN_FLOOR if d >= 0.0 else -DEN_FLOOR


def max_dim(r: int) -> int:
    """Largest admissible (odd) window dimension, 5*r rounded down to odd."""
    m = 5 * r
    return m if m % 2 == 1 else m - 1


def fit_odd_dims(tau: float, r: int) -> tuple[int, int]:
    """Quantize the analytic window (tau*r) x (r/tau) to odd integers.

    Candidate odd pairs are scanned for the one nearest the analytic
    dimensions among those keeping |length*width - r^2| <= 2r; plain
    nearest-odd rounding can break that area bound, so the bound takes
    priority and the distance to the analytic pair breaks ties.
    """
    cap = max_dim(r)
    w0 = tau * r
    h0 = (r * r) / w0 if w0 > 0.0 else float(cap)
    target = float(r * r)
    bound = 2.0 * r
    best_key = None
    best = (1, 1)
    for w in range(1, cap + 1, 2):
        h = 2 * int(math.floor((target / w) * 0.5)) + 1
        if h < 1:
            h = 1
        elif h > cap:
            h = cap
        err = abs(w * h - target)
        key = (0 if err <= bound else 1, abs(w - w0), abs(h - h0), w)
        if best_key is None or key < best_key:
            best_key = key
            best = (w, h)
    return best


def init_window(gx: float, gy: float, r: int, center=(0, 0)) -> AdaptiveWindow | None:
    """Initial window from one pixel's gradients, or None for skipped pixels.

    Pixels with a 90-degree gradient angle (gx = 0, gy != 0) and flat pixels
    (gx = gy = 0) are skipped and keep the plain filter result.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if gx == 0.0:
        return None
    tau = abs((gx + 1.0) / _safe_den(gy + 1.0))
    theta = math.atan(gy / gx)
    length, width = fit_odd_dims(tau, r)
    return AdaptiveWindow(
        row=center[0], col=center[1], length=length, width=width,
        theta=theta, tau=tau, iterations=0,
    )


def _iter_members(win: AdaptiveWindow, shape):
    """Yield clamped (row, col, u, v) for raster cells inside the rectangle."""
    h, w = shape
    st, ct = math.sin(win.theta), math.cos(win.theta)
    half_l, half_w = 0.5 * win.length, 0.5 * win.width
    ex = half_l * abs(st) + half_w * abs(ct)
    ey = half_l * abs(ct) + half_w * abs(st)
    mb, nb = int(math.floor(ex)), int(math.floor(ey))
    for n in range(-nb, nb + 1):
        ii = min(max(win.row + n, 0), h - 1)
        for m in range(-mb, mb + 1):
            u = -m * st + n * ct  # along the edge
            v = m * ct + n * st  # along the gradient
            if abs(u) <= half_l and abs(v) <= half_w:
                jj = min(max(win.col + m, 0), w - 1)
                yield ii, jj, u, v


def window_gradient_sums(grad: GradientField, win: AdaptiveWindow) -> WindowedGradients:
    """Signed and absolute sums of gx/gy over the window's raster cells."""
    gx, gy = grad.gx, grad.gy
    sx = sy = ax = ay = 0.0
    for ii, jj, _, _ in _iter_members(win, gx.shape):
        sx += gx[ii, jj]
        sy += gy[ii, jj]
        ax += abs(gx[ii, jj])
        ay += abs(gy[ii, jj])
    return WindowedGradients(sum_x=sx, sum_y=sy, abs_sum_x=ax, abs_sum_y=ay)


def refine_window(win: AdaptiveWindow, grad: GradientField, r: int) -> AdaptiveWindow:
    """Iterate the aspect ratio from windowed sums until it settles.

    The ratio update uses the signed sums; the orientation update uses the
    absolute sums.  Stops when the ratio moves less than TAU_TOL or after
    MAX_ITERS iterations, whichever comes first.
    """
    tau, theta = win.tau, win.theta
    length, width = win.length, win.width
    iters = 0
    for it in range(1, MAX_ITERS + 1):
        iters = it
        probe = AdaptiveWindow(win.row, win.col, length, width, theta, tau, 0)
        s = window_gradient_sums(grad, probe)
        tau_new = abs((s.sum_x + 1.0) / _safe_den(s.sum_y + 1.0))
        length, width = fit_odd_dims(tau_new, r)
        theta = math.atan2(s.abs_sum_y, s.abs_sum_x)
        done = abs(tau_new - tau) < TAU_TOL
        tau = tau_new
        if done:
            break
    return AdaptiveWindow(win.row, win.col, length, width, theta, tau, iters)


def window_mean(x: np.ndarray, win: AdaptiveWindow, use_median: bool = False) -> float:
    """Gaussian-weighted (or median) value over the window's raster cells."""
    if use_median:
        vals = sorted(float(x[ii, jj]) for ii, jj, _, _ in _iter_members(win, x.shape))
        k = len(vals)
        mid = k // 2
        return vals[mid] if k % 2 == 1 else (vals[mid - 1] + vals[mid]) * 0.5
    half_l, half_w = 0.5 * win.length, 0.5 * win.width
    acc = wsum = 0.0
    for ii, jj, u, v in _iter_members(win, x.shape):
        wu, wv = u / half_l, v / half_w
        wgt = math.exp(-0.5 * (wu * wu + wv * wv))
        acc += wgt * x[ii, jj]
        wsum += wgt
    return acc / wsum


def oriented_filter(
    x: np.ndarray,
    grad: GradientField,
    gprime: EdgeAwareGradient,
    r: int,
    use_median: bool = False,
    collect: bool = False,
    threads: int | None = None,
):
    """Adaptive-window pass over a plane.

    Eligible pixels (nonzero edge-aware gradient, non-90-degree angle) are
    replaced by their oriented-window mean; all others pass through.  With
    ``collect=True`` also returns per-pixel window diagnostics.
    """
    x = as_plane(x)
    out, diag = _backend.oriented_filter_pass(
        x,
        as_plane(grad.gx),
        as_plane(grad.gy),
        as_plane(gprime.gprime),
        r,
        use_median=use_median,
        collect=collect,
        threads=threads,
    )
    return (out, diag) if collect else out
