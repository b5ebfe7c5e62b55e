import numpy as np
import pytest

from conftest import two_color_image
from objcut import (GmmParams, build_graph, compute_beta, grabcut, mask_iou,
                    max_flow_min_cut)
from objcut.errors import DegenerateTrimap
from objcut.grabcut import GrabCutParams, _smoothness_arcs
from oracles import min_cut_bruteforce


def _uniform_gmm(mean, sigma2=25.0):
    return GmmParams(weights=np.array([1.0]),
                     means=np.array([mean], dtype=float),
                     covariances=np.array([sigma2 * np.eye(3)]))


def test_params_validation():
    with pytest.raises(ValueError):
        GrabCutParams(components=0)
    with pytest.raises(ValueError):
        GrabCutParams(gamma=-1.0)
    with pytest.raises(ValueError):
        GrabCutParams(max_iters=0)


def test_beta_zero_for_constant_image():
    img = np.full((4, 4, 3), 120, np.uint8)
    assert compute_beta(img) == 0.0


def test_beta_invariant_to_constant_shift(rng):
    img = rng.integers(0, 200, (6, 6, 3)).astype(np.int64)
    assert compute_beta(img) == compute_beta(img + 30)
    _, _, caps_a = _smoothness_arcs(img, compute_beta(img), 50.0)
    _, _, caps_b = _smoothness_arcs(img + 30, compute_beta(img + 30), 50.0)
    assert np.array_equal(caps_a, caps_b)


def test_nlink_capacity_identical_colors():
    img = np.full((1, 2, 3), 90, np.uint8)
    gamma = 50.0
    trimap = np.array([[1, 0]], np.uint8)
    net = build_graph(img, trimap, _uniform_gmm((90, 90, 90)), _uniform_gmm((90, 90, 90)), gamma)
    nlinks = [c for u, v, c in net.arcs() if u < 2 and v < 2]
    assert nlinks == [gamma, gamma]  # exp(0) == 1, both directions


def test_nlink_diagonal_distance_weight():
    img = np.full((2, 2, 3), 90, np.uint8)
    gamma = 50.0
    p, q, caps = _smoothness_arcs(img, 0.0, gamma)
    pairs = {(int(a), int(b)): c for a, b, c in zip(p, q, caps)}
    assert pairs[(3, 0)] == pytest.approx(gamma / np.sqrt(2.0))  # down-right
    assert pairs[(2, 1)] == pytest.approx(gamma / np.sqrt(2.0))  # down-left
    assert pairs[(1, 0)] == gamma


def test_sure_fg_unbeatable_on_two_pixel_instance():
    # hard-FG pixel 0 with a color the background model loves: without the
    # big source arc the cheap cut would drop it to the sink side
    img = np.zeros((1, 2, 3), np.uint8)
    img[0, 0] = (200, 50, 50)
    img[0, 1] = (60, 60, 180)
    trimap = np.array([[1, 2]], np.uint8)
    fg_gmm = _uniform_gmm((60.0, 60.0, 180.0))
    bg_gmm = _uniform_gmm((200.0, 50.0, 50.0))
    net = build_graph(img, trimap, fg_gmm, bg_gmm, gamma=50.0)
    flow, side = max_flow_min_cut(net)
    assert side[0], "sure-foreground pixel must stay on the source side"
    assert flow == pytest.approx(min_cut_bruteforce(4, 2, 3, net.arcs()), rel=1e-12)


def test_graph_capacities_nonnegative(rng):
    img = rng.integers(0, 255, (5, 5, 3)).astype(np.uint8)
    trimap = np.full((5, 5), 3, np.uint8)
    trimap[0, 0] = 1
    trimap[4, 4] = 0
    fg = _uniform_gmm((200.0, 200.0, 200.0), sigma2=1e-3)  # tight: negative logs
    bg = _uniform_gmm((20.0, 20.0, 20.0), sigma2=1e-3)
    net = build_graph(img, trimap, fg, bg, gamma=50.0)
    assert min(c for _, _, c in net.arcs()) >= 0.0


def _fixture_trimap(h, w):
    trimap = np.full((h, w), 3, np.uint8)
    trimap[h // 4, w // 4] = 1
    trimap[3 * h // 4, w // 4] = 1
    trimap[h // 4, 3 * w // 4] = 0
    trimap[3 * h // 4, 3 * w // 4] = 0
    return trimap


def test_two_color_fixture_iou():
    img = two_color_image(32, 32, 16, (200, 50, 50), (50, 50, 200))
    trimap = np.full((32, 32), 3, np.uint8)
    for y in (4, 10, 20, 28):
        trimap[y, y % 16] = 1
        trimap[y, 16 + (y % 16)] = 0
    truth = np.zeros((32, 32), np.uint8)
    truth[:, :16] = 1
    mask = grabcut(img, trimap, GrabCutParams(rng_seed=7))
    assert mask_iou(mask, truth) >= 0.95


def test_energy_non_increasing(rng):
    img = two_color_image(16, 16, 8, (180, 40, 40), (40, 40, 180))
    noise = rng.integers(-15, 16, img.shape)
    img = np.clip(img.astype(int) + noise, 0, 255).astype(np.uint8)
    _, energies = grabcut(img, _fixture_trimap(16, 16),
                          GrabCutParams(rng_seed=3), return_trace=True)
    drops = np.diff(energies)
    assert np.all(drops <= 1e-6 * np.abs(energies[:-1]))


def test_hard_labels_never_flip():
    img = np.full((8, 8, 3), 128, np.uint8)  # constant: data gives no signal
    trimap = np.full((8, 8), 1, np.uint8)
    trimap[7, 7] = 0
    mask = grabcut(img, trimap, GrabCutParams(rng_seed=1))
    expected = np.ones((8, 8), np.uint8)
    expected[7, 7] = 0
    assert np.array_equal(mask, expected)


def test_degenerate_trimaps_rejected():
    img = np.zeros((4, 4, 3), np.uint8)
    with pytest.raises(DegenerateTrimap):
        grabcut(img, np.full((4, 4), 3, np.uint8))
    with pytest.raises(DegenerateTrimap):
        grabcut(img, np.full((4, 4), 2, np.uint8))
    with pytest.raises(DegenerateTrimap):
        grabcut(img, np.full((4, 4), 1, np.uint8))


def test_fixed_seed_is_deterministic(rng):
    img = rng.integers(0, 255, (12, 12, 3)).astype(np.uint8)
    trimap = _fixture_trimap(12, 12)
    a = grabcut(img, trimap, GrabCutParams(rng_seed=21))
    b = grabcut(img, trimap, GrabCutParams(rng_seed=21))
    assert np.array_equal(a, b)


def test_single_row_and_column_images():
    row = np.zeros((1, 8, 3), np.uint8)
    row[0, :4] = (200, 40, 40)
    row[0, 4:] = (40, 40, 200)
    trimap = np.array([[1, 3, 3, 3, 3, 3, 3, 0]], np.uint8)
    mask = grabcut(row, trimap, GrabCutParams(rng_seed=2))
    assert mask[0, 0] == 1 and mask[0, 7] == 0
    col = row.transpose(1, 0, 2).copy()
    mask_c = grabcut(col, trimap.T.copy(), GrabCutParams(rng_seed=2))
    assert mask_c[0, 0] == 1 and mask_c[7, 0] == 0
