import cv2
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lumen_forge import ColorImage, invert, load_image, local_stats, max_channel, save_image
from lumen_forge.image_core import as_plane, box_mean

from .oracles import naive_local_mean_var


def test_load_full_scale_png(tmp_path):
    path = tmp_path / "white.png"
    cv2.imwrite(str(path), np.full((2, 2, 3), 255, dtype=np.uint8))
    img = load_image(path)
    for p in img.planes:
        assert np.array_equal(p, np.ones((2, 2)))


def test_load_8bit_scaling(tmp_path):
    path = tmp_path / "mid.png"
    cv2.imwrite(str(path), np.full((3, 3, 3), 128, dtype=np.uint8))
    img = load_image(path)
    assert np.allclose(img.r, 128 / 255)


def test_load_grayscale_replicates(tmp_path):
    path = tmp_path / "gray.png"
    cv2.imwrite(str(path), (np.arange(16, dtype=np.uint8).reshape(4, 4) * 15))
    img = load_image(path)
    assert np.array_equal(img.r, img.g)
    assert np.array_equal(img.g, img.b)
    assert img.is_gray()


def test_load_missing_and_bad_files(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_image(tmp_path / "nope.png")
    bad = tmp_path / "bad.png"
    bad.write_bytes(b"this is not a png")
    with pytest.raises(ValueError):
        load_image(bad)


def test_save_half_gray_quantizes_to_128(tmp_path):
    path = tmp_path / "half.png"
    save_image(np.full((4, 4), 0.5), path, depth=8)
    raw = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    assert np.all(raw == 128)


def test_save_clamps_out_of_range(tmp_path):
    path = tmp_path / "over.png"
    save_image(np.full((2, 2), 1.2), path, depth=8)
    raw = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    assert np.all(raw == 255)


def test_save_load_16bit_half_step(tmp_path):
    vals = np.array([[0.0, 0.25], [0.5, 1.0]])
    path = tmp_path / "rt.png"
    save_image(vals, path, depth=16)
    back = load_image(path)
    assert np.abs(back.r - vals).max() <= 1.0 / 131070


@pytest.mark.parametrize("depth", [8, 16])
def test_save_load_roundtrip_random(tmp_path, rng, depth):
    img = ColorImage(*(rng.random((9, 7)) for _ in range(3)))
    path = tmp_path / "rand.png"
    save_image(img, path, depth=depth)
    back = load_image(path)
    step = 1.0 / (2 ** (depth - 1) * 2 - 2)  # half of 1/(2^depth - 1)
    for a, b in zip(img.planes, back.planes):
        assert np.abs(a - b).max() <= step / 2 + 1e-12


def test_save_rejects_non_png(tmp_path):
    with pytest.raises(ValueError):
        save_image(np.zeros((2, 2)), tmp_path / "x.jpg")
    with pytest.raises(ValueError):
        save_image(np.zeros((2, 2)), tmp_path / "x.png", depth=12)


def test_invert_basics():
    assert invert(np.array([[0.3]]))[0, 0] == pytest.approx(0.7)
    assert np.array_equal(invert(np.ones((3, 3))), np.zeros((3, 3)))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(0.0, 1.0, allow_nan=False), min_size=4, max_size=4))
def test_invert_is_exact_involution(vals):
    plane = np.array(vals).reshape(2, 2)
    assert np.array_equal(invert(invert(plane)), plane)


def test_max_channel_examples():
    img = ColorImage(
        np.array([[0.2]]), np.array([[0.5]]), np.array([[0.3]])
    )
    assert max_channel(img)[0, 0] == 0.5
    gray = ColorImage.from_gray(np.full((3, 3), 0.42))
    assert np.array_equal(max_channel(gray), gray.r)
    black = ColorImage.from_gray(np.zeros((2, 2)))
    assert np.array_equal(max_channel(black), np.zeros((2, 2)))


def test_max_channel_dominates_channels(rng):
    img = ColorImage(*(rng.random((8, 8)) for _ in range(3)))
    mc = max_channel(img)
    for p in img.planes:
        assert np.all(mc >= p)


def test_local_stats_constant():
    stats = local_stats(np.full((6, 6), 0.37), radius=2)
    assert np.allclose(stats.mean, 0.37)
    assert np.allclose(stats.variance, 0.0)
    assert np.all(stats.variance >= 0)


def test_local_stats_center_of_3x3_ramp():
    plane = (np.arange(9, dtype=np.float64).reshape(3, 3) + 1) / 10.0
    stats = local_stats(plane, radius=1)
    assert stats.mean[1, 1] == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("radius", [1, 3, 7])
def test_local_stats_matches_naive(rng, radius):
    plane = rng.random((32, 32))
    stats = local_stats(plane, radius)
    mean, var = naive_local_mean_var(plane, radius)
    assert np.abs(stats.mean - mean).max() <= 1e-9
    assert np.abs(stats.variance - var).max() <= 1e-9


def test_box_mean_matches_naive(rng):
    plane = rng.random((17, 23))
    mean, _ = naive_local_mean_var(plane, 4)
    assert np.abs(box_mean(plane, 4) - mean).max() <= 1e-9


def test_as_plane_rejects_bad_input():
    with pytest.raises(ValueError):
        as_plane(np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        as_plane(np.array([[np.nan]]))


def test_color_image_shape_mismatch():
    with pytest.raises(ValueError):
        ColorImage(np.zeros((2, 2)), np.zeros((2, 3)), np.zeros((2, 2)))
