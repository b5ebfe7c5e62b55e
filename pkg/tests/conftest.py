import numpy as np
import pytest

from objcut import FeatureMapStack


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def make_stack(channels, layer="conv5_3", source=""):
    """Stack from a list/array of (H, W) channel grids."""
    return FeatureMapStack(np.asarray(channels, dtype=np.float32),
                           layer_name=layer, source_image=source)


def two_color_image(h, w, split, left, right):
    """Vertical split test image: columns < split get `left`."""
    img = np.zeros((h, w, 3), dtype=np.uint8)
    img[:, :split] = left
    img[:, split:] = right
    return img
