import numpy as np
import pytest

from lumen_forge import chi_map, compute_gradients, edge_aware_weight, gdwgif, psi_map
from lumen_forge.edge_gradient import EdgeAwareGradient
from lumen_forge.gdwgif import FilterParams
from lumen_forge.image_core import box_mean

from .oracles import naive_chi, naive_guided_filter, naive_psi


def _gp(arr):
    return EdgeAwareGradient(gprime=np.asarray(arr, dtype=np.float64))


def test_chi_zero_gradient_map():
    chi = chi_map(_gp(np.zeros((10, 10))), np.full((10, 10), 0.5), xi=3)
    assert np.array_equal(chi, np.zeros((10, 10)))


def test_chi_collapses_to_gprime_for_constant_variance(monkeypatch, rng):
    gp = rng.random((8, 8)) + 0.5

    class _Stats:
        def __init__(self, variance):
            self.variance = variance

    import lumen_forge.gdwgif as module

    monkeypatch.setattr(module, "local_stats", lambda x, r: _Stats(np.full(x.shape, 0.25)))
    chi = chi_map(_gp(gp), rng.random((8, 8)), xi=3)
    assert np.abs(chi - gp).max() <= 1e-12


def test_chi_matches_naive(rng):
    gp = rng.random((16, 16))
    guide = rng.random((16, 16))
    chi = chi_map(_gp(gp), guide, xi=3)
    assert np.abs(chi - naive_chi(gp, guide, 3)).max() <= 1e-9


def test_weight_constant_chi_is_one():
    w = edge_aware_weight(np.full((6, 6), 0.7), eps=1e-6)
    assert np.abs(w - 1.0).max() <= 1e-12


def test_weight_normalized_direction():
    # pixel activity over image mean: with chi(k)=0 and mean(chi+eps)=2*eps
    # the weight is 0.5, halving the pixel's share of the regularizer budget
    eps = 1e-6
    chi = np.zeros((2, 2))
    chi[0, 0] = 4 * eps  # mean(chi) = eps -> mean(chi + eps) = 2 eps
    w = edge_aware_weight(chi, eps)
    assert w[1, 1] == pytest.approx(0.5, abs=1e-12)
    assert w[0, 0] == pytest.approx(2.5, abs=1e-12)


def test_weight_mean_is_one(rng):
    chi = rng.random((16, 16)) * 3.0
    w = edge_aware_weight(chi, eps=1e-6)
    assert abs(w.mean() - 1.0) <= 1e-6
    assert np.all(w > 0)


def test_weight_identity_vs_naive_loop(rng):
    eps = 1e-6
    chi = rng.random((12, 12))
    w = edge_aware_weight(chi, eps)
    denom = chi.mean() + eps
    for i in range(12):
        for j in range(12):
            assert w[i, j] == pytest.approx((chi[i, j] + eps) / denom, abs=1e-12)
    assert np.abs(w * denom - (chi + eps)).max() <= 1e-12


def test_psi_min_value():
    chi = np.linspace(0.0, 1.0, 64).reshape(8, 8)
    psi = psi_map(chi)
    # min(chi) maps to 1 - 1/(1 + e^-4)
    assert psi[0, 0] == pytest.approx(1.0 - 1.0 / (1.0 + np.exp(-4.0)), abs=1e-12)
    assert psi[0, 0] == pytest.approx(0.01799, abs=5e-6)
    assert np.all((psi > 0) & (psi < 1))


def test_psi_at_exact_mean_is_half():
    chi = np.array([[0.0, 0.2], [0.4, 0.2]])  # mean = 0.2 appears in the plane
    psi = psi_map(chi)
    assert psi[0, 1] == pytest.approx(0.5, abs=1e-12)


def test_psi_constant_degenerate():
    assert np.array_equal(psi_map(np.full((5, 5), 0.3)), np.full((5, 5), 0.5))


def test_psi_matches_naive(rng):
    chi = rng.random((16, 16)) * 2.0
    assert np.abs(psi_map(chi) - naive_psi(chi)).max() <= 1e-9


def test_gdwgif_constant_fixpoint():
    plane = np.full((20, 20), 0.37)
    z = gdwgif(plane, params=FilterParams(xi=3))
    assert np.abs(z - plane).max() <= 1e-12


@pytest.mark.parametrize("lam", [0.1, 0.2])
@pytest.mark.parametrize("radius", [2, 3])
def test_gif_reduction_matches_least_squares(rng, lam, radius):
    src = rng.random((16, 16))
    params = FilterParams(lam=lam, xi=radius)
    ones = np.ones_like(src)
    zeros = np.zeros_like(src)
    z = gdwgif(src, params=params, weight_override=ones, shift_override=zeros, adaptive_pass=False)
    ref = naive_guided_filter(src, src, radius, lam)
    assert np.abs(z - ref).max() <= 1e-6


def test_gdwgif_smooths_pure_noise(rng):
    plane = np.clip(0.5 + rng.normal(0, 0.02, (48, 48)), 0, 1)
    z = gdwgif(plane, params=FilterParams(lam=0.2, xi=3))
    assert z.var() < plane.var()


def test_gdwgif_bounded_response(rng):
    plane = np.clip(rng.random((32, 32)), 0, 1)
    params = FilterParams(xi=3)
    z = gdwgif(plane, params=params)
    assert z.min() >= plane.min() - 0.01
    assert z.max() <= plane.max() + 0.01
    # slope coefficients stay in [0, 1] plus regularizer slack for self-guiding
    from lumen_forge.edge_gradient import classify_edges, denoise_gradients
    from lumen_forge.gdwgif import edge_weight_maps

    grad = compute_gradients(plane)
    classes = classify_edges(grad, params.xi, params.threshold)
    gp = denoise_gradients(grad, classes)
    maps = edge_weight_maps(gp, plane, params)
    mean_i = box_mean(plane, params.xi)
    corr = box_mean(plane * plane, params.xi)
    var_i = np.maximum(corr - mean_i**2, 0.0)
    beta = params.lam / maps.weight
    a = (var_i + beta * maps.psi) / (var_i + beta + 1e-12)
    assert np.all(a >= 0.0)
    assert np.all(a <= 1.0 + 1e-9)


def test_gdwgif_sharper_than_gif_at_edges(rng):
    img = np.full((96, 96), 0.3)
    img[:, 48:] = 0.7
    img[30:60, 20:40] = 0.55
    noisy = np.clip(img + rng.normal(0, 0.02, img.shape), 0, 1)
    params = FilterParams(lam=0.1, xi=3)  # 7x7 window
    z_gdw = gdwgif(noisy, params=params)
    z_gif = gdwgif(
        noisy,
        params=params,
        weight_override=np.ones_like(noisy),
        shift_override=np.zeros_like(noisy),
        adaptive_pass=False,
    )
    band = np.zeros_like(img, dtype=bool)
    band[:, 45:52] = True
    band[28:62, 18:42] = True
    mag_gdw = compute_gradients(z_gdw).magnitude[band].mean()
    mag_gif = compute_gradients(z_gif).magnitude[band].mean()
    assert mag_gdw > mag_gif


def test_gdwgif_shape_mismatch():
    with pytest.raises(ValueError):
        gdwgif(np.zeros((4, 4)), np.zeros((4, 5)), FilterParams(xi=1))


def test_filter_params_validation():
    with pytest.raises(ValueError):
        FilterParams(lam=0.0)
    with pytest.raises(ValueError):
        FilterParams(xi=0)
