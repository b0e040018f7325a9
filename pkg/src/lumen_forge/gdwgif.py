"""Gradient-domain weighted guided filter.

A guided filter whose regularization is modulated per pixel by an edge-aware
weight built from the denoised gradient map, and whose slope coefficient is
pulled toward a sigmoid shift so strong edges keep unit gain.  A final
oriented-window pass cleans residual noise next to edges.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .edge_gradient import (
    EdgeAwareGradient,
    GradientField,
    classify_edges,
    compute_gradients,
    denoise_gradients,
)
from .image_core import as_plane, box_mean, local_stats

__all__ = ["EdgeWeightMaps", "FilterParams", "chi_map", "edge_aware_weight", "gdwgif", "psi_map"]

_MEAN_GUARD = 1e-12
_VAR_GUARD = 1e-12


@dataclass(frozen=True)
class FilterParams:
    """Tunables of the filter.

    ``eps`` defaults to (0.001 * dynamic range)^2 with the normalized range 1.
    """

    lam: float = 0.2
    xi: int = 7
    r: int = 5
    threshold: float = 0.2
    eps: float = 1e-6

    def __post_init__(self):
        if self.lam <= 0 or self.xi < 1 or self.eps <= 0 or self.r < 1 or self.threshold <= 0:
            raise ValueError("invalid filter parameters")


@dataclass(frozen=True)
class EdgeWeightMaps:
    chi: np.ndarray
    weight: np.ndarray
    psi: np.ndarray


def chi_map(gprime: EdgeAwareGradient, guide: np.ndarray, xi: int) -> np.ndarray:
    """Edge-activity map: product of two variation coefficients and g'.

    Each factor is a windowed variance plane divided by its global mean
    (radius 3 on the denoised gradient, radius xi on the guide).
    """
    gp = as_plane(gprime.gprime)
    guide = as_plane(guide)
    var_g = local_stats(gp, 3).variance
    var_i = local_stats(guide, xi).variance
    phi_g = var_g / max(float(var_g.mean()), _MEAN_GUARD)
    phi_i = var_i / max(float(var_i.mean()), _MEAN_GUARD)
    return phi_g * phi_i * gp


def edge_aware_weight(chi: np.ndarray, eps: float) -> np.ndarray:
    """Regularization divisor: (chi + eps) over the global mean of (chi + eps).

    The weight scales with each pixel's own edge activity and averages to 1
    over the image, so edge pixels (large chi) divide the regularizer down
    and keep their contrast while flat pixels get the full smoothing pull
    toward the sigmoid shift target.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    chi = as_plane(chi)
    return (chi + eps) / (float(chi.mean()) + eps)


def psi_map(chi: np.ndarray) -> np.ndarray:
    """Sigmoid shift target for the slope coefficient, in (0, 1).

    Centered at the global mean of chi with gain 4 / (mean - min); a constant
    chi plane degenerates to 0.5 everywhere.
    """
    chi = as_plane(chi)
    mu = float(chi.mean())
    lo = float(chi.min())
    if mu - lo < 1e-12:
        return np.full_like(chi, 0.5)
    eta = 4.0 / (mu - lo)
    # 1 - 1/(1 + e^t) computed as the logistic of t
    with np.errstate(over="ignore"):
        return 1.0 / (1.0 + np.exp(-eta * (chi - mu)))


def edge_weight_maps(gprime: EdgeAwareGradient, guide: np.ndarray, params: FilterParams) -> EdgeWeightMaps:
    chi = chi_map(gprime, guide, params.xi)
    return EdgeWeightMaps(chi=chi, weight=edge_aware_weight(chi, params.eps), psi=psi_map(chi))


def gdwgif(
    src: np.ndarray,
    guide: np.ndarray | None = None,
    params: FilterParams | None = None,
    *,
    grad: GradientField | None = None,
    gprime: EdgeAwareGradient | None = None,
    weight_override: np.ndarray | None = None,
    shift_override: np.ndarray | None = None,
    adaptive_pass: bool = True,
    use_median: bool = False,
) -> np.ndarray:
    """Filter ``src`` guided by ``guide`` (itself when omitted).

    Optional ``grad``/``gprime`` supply an external gradient constraint
    (both derived from the guide when omitted).  ``weight_override`` and
    ``shift_override`` replace the edge-aware weight and shift maps; with
    weight 1 and shift 0 the filter reduces to the plain guided filter.

    Per window the closed-form minimizer of

        sum_i (a*I_i + b - q_i)^2 + (lam/weight) * (a - shift)^2

    is a = (cov(I, q) + beta*shift) / (var(I) + beta), b = mean(q) - a*mean(I)
    with beta = lam/weight, obtained by zeroing the derivatives in a and b.
    The per-window coefficients are window-averaged before composing the
    output, then eligible edge pixels get the oriented-window pass.
    """
    params = params or FilterParams()
    q = as_plane(src)
    guide_plane = q if guide is None else as_plane(guide)
    if guide_plane.shape != q.shape:
        raise ValueError("guide and source must share dimensions")

    if grad is None:
        grad = compute_gradients(guide_plane)
    if gprime is None:
        classes = classify_edges(grad, params.xi, params.threshold)
        gprime = denoise_gradients(grad, classes)

    if weight_override is not None or shift_override is not None:
        chi = chi_map(gprime, guide_plane, params.xi)
        weight = (
            as_plane(weight_override)
            if weight_override is not None
            else edge_aware_weight(chi, params.eps)
        )
        shift = as_plane(shift_override) if shift_override is not None else psi_map(chi)
    else:
        maps = edge_weight_maps(gprime, guide_plane, params)
        weight, shift = maps.weight, maps.psi

    xi = params.xi
    mean_i = box_mean(guide_plane, xi)
    mean_q = box_mean(q, xi) if guide is not None else mean_i
    corr_iq = box_mean(guide_plane * q, xi)
    corr_ii = box_mean(guide_plane * guide_plane, xi)
    cov_iq = corr_iq - mean_i * mean_q
    var_i = np.maximum(corr_ii - mean_i * mean_i, 0.0)

    beta = params.lam / weight
    a = (cov_iq + beta * shift) / (var_i + beta + _VAR_GUARD)
    b = mean_q - a * mean_i
    z = box_mean(a, xi) * guide_plane + box_mean(b, xi)

    if adaptive_pass:
        z, _ = _backend.oriented_filter_pass(
            np.ascontiguousarray(z), grad.gx, grad.gy, gprime.gprime, params.r,
            use_median=use_median,
        )
    return z
