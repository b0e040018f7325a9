import numpy as np
import pytest
import skimage.data as skd
from skimage.transform import resize

from lumen_forge import ColorImage, save_image

# public sample photos used for the desk-scale evaluation protocol; mixed
# natural scenes, converted to luminance like the paper's measurement imagery
PROTOCOL_PHOTOS = (
    "camera",
    "moon",
    "coins",
    "text",
    "clock",
    "brick",
    "grass",
    "gravel",
    "astronaut",
    "coffee",
)


def _gray_512(name: str) -> np.ndarray:
    arr = getattr(skd, name)()
    if arr.ndim == 3:
        arr = arr[:, :, :3].astype(np.float64).mean(axis=2) / 255.0
    else:
        arr = arr.astype(np.float64) / 255.0
    h, w = arr.shape
    s = min(h, w)
    arr = arr[(h - s) // 2 : (h - s) // 2 + s, (w - s) // 2 : (w - s) // 2 + s]
    if s != 512:
        arr = resize(arr, (512, 512), anti_aliasing=True)
    return np.clip(np.ascontiguousarray(arr), 0.0, 1.0)


@pytest.fixture(scope="session")
def photo_dir(tmp_path_factory):
    """Ten public test photos as 512x512 grayscale PNGs."""
    root = tmp_path_factory.mktemp("photos")
    for name in PROTOCOL_PHOTOS:
        save_image(ColorImage.from_gray(_gray_512(name)), root / f"{name}.png", depth=8)
    return root


def _color_square(name: str, size: int) -> np.ndarray:
    arr = getattr(skd, name)()[:, :, :3].astype(np.float64) / 255.0
    h, w = arr.shape[:2]
    s = min(h, w)
    arr = arr[(h - s) // 2 : (h - s) // 2 + s, (w - s) // 2 : (w - s) // 2 + s]
    return np.clip(resize(arr, (size, size, 3), anti_aliasing=True), 0.0, 1.0)


@pytest.fixture(scope="session")
def hazy_photos():
    """Three public photos with synthetic atmospheric haze (scattering model)."""
    out = []
    for name in ("astronaut", "coffee", "chelsea"):
        clean = _color_square(name, 256)
        h, w = clean.shape[:2]
        yy, xx = np.mgrid[0:h, 0:w]
        depth = 0.4 + 0.6 * (yy / h) + 0.15 * np.sin(xx / 31.0)
        trans = np.exp(-1.2 * depth)[:, :, None]
        hazed = np.clip(clean * trans + 0.95 * (1.0 - trans), 0.0, 1.0)
        out.append(
            ColorImage(
                np.ascontiguousarray(hazed[:, :, 0]),
                np.ascontiguousarray(hazed[:, :, 1]),
                np.ascontiguousarray(hazed[:, :, 2]),
            )
        )
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240712)
