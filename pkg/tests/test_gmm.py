import numpy as np
import pytest

from objcut import fit_gmm, gmm_neg_log_density
from objcut.errors import InsufficientSamples
from objcut.gmm import COV_RIDGE, GmmParams


def direct_neg_log_density(gmm, color):
    """Independent evaluation: sum the component densities numerically."""
    total = 0.0
    d = len(color)
    for w, mu, cov in zip(gmm.weights, gmm.means, gmm.covariances):
        if w == 0.0:
            continue
        diff = np.asarray(color, float) - mu
        expo = -0.5 * diff @ np.linalg.inv(cov) @ diff
        norm = np.sqrt((2.0 * np.pi) ** d * np.linalg.det(cov))
        total += w * np.exp(expo) / norm
    with np.errstate(divide="ignore"):  # density may underflow to 0 -> inf
        return -np.log(total)


def test_single_component_closed_form(rng):
    samples = rng.random((40, 3)) * 255.0
    gmm = fit_gmm(samples, 1, rng_seed=5)
    assert gmm.weights.tolist() == [1.0]
    assert np.allclose(gmm.means[0], samples.mean(axis=0), rtol=1e-12)
    expected_cov = np.cov(samples.T, bias=True) + COV_RIDGE * np.eye(3)
    assert np.allclose(gmm.covariances[0], expected_cov, rtol=1e-9)


def test_two_cluster_recovery():
    rng = np.random.default_rng(0)
    pts = np.vstack([
        rng.normal((10.0, 10.0, 10.0), 5.0, (500, 3)),
        rng.normal((240.0, 240.0, 240.0), 5.0, (500, 3)),
    ])
    gmm = fit_gmm(pts, 2, rng_seed=3)
    means = gmm.means[np.argsort(gmm.means[:, 0])]
    assert np.abs(means[0] - 10.0).max() < 3.0
    assert np.abs(means[1] - 240.0).max() < 3.0
    assert np.abs(gmm.weights - 0.5).max() < 0.05


def test_insufficient_samples():
    with pytest.raises(InsufficientSamples):
        fit_gmm(np.zeros((1, 3)), 2, rng_seed=0)


def test_log_likelihood_never_decreases(rng):
    for seed in range(5):
        local = np.random.default_rng(seed)
        centers = local.random((3, 3)) * 255.0
        pts = np.concatenate([
            local.normal(c, local.uniform(2.0, 30.0), (80, 3)) for c in centers])
        gmm = fit_gmm(pts, int(local.integers(1, 6)), rng_seed=seed)
        ll = gmm.ll_history
        assert np.all(np.diff(ll) >= -1e-9 * np.abs(ll[:-1]))


def test_deterministic_for_fixed_seed(rng):
    samples = rng.random((120, 3)) * 255.0
    a = fit_gmm(samples, 4, rng_seed=11)
    b = fit_gmm(samples, 4, rng_seed=11)
    assert np.array_equal(a.weights, b.weights)
    assert np.array_equal(a.means, b.means)
    assert np.array_equal(a.covariances, b.covariances)


def test_weights_sum_to_one(rng):
    samples = rng.random((60, 3)) * 255.0
    gmm = fit_gmm(samples, 5, rng_seed=2)
    assert abs(gmm.weights.sum() - 1.0) <= 1e-9


def test_identical_samples_stay_finite():
    samples = np.full((10, 3), 77.0)
    gmm = fit_gmm(samples, 2, rng_seed=1)
    assert np.isfinite(gmm_neg_log_density(gmm, (77.0, 77.0, 77.0)))
    assert np.isfinite(gmm_neg_log_density(gmm, (0.0, 0.0, 0.0)))


def test_neg_log_density_at_gaussian_mean():
    sigma2 = 4.0
    gmm = GmmParams(weights=np.array([1.0]),
                    means=np.array([[50.0, 60.0, 70.0]]),
                    covariances=np.array([sigma2 * np.eye(3)]))
    got = gmm_neg_log_density(gmm, (50.0, 60.0, 70.0))
    assert got == pytest.approx(0.5 * 3.0 * np.log(2.0 * np.pi * sigma2), rel=1e-12)


def test_neg_log_density_monotone_away_from_mean():
    gmm = GmmParams(weights=np.array([1.0]),
                    means=np.array([[100.0, 100.0, 100.0]]),
                    covariances=np.array([9.0 * np.eye(3)]))
    values = [gmm_neg_log_density(gmm, (100.0 + step, 100.0, 100.0))
              for step in (0.0, 1.0, 2.0, 5.0, 10.0)]
    assert all(a < b for a, b in zip(values, values[1:]))


def test_mixture_density_matches_direct_sum(rng):
    gmm = GmmParams(
        weights=np.array([0.3, 0.7]),
        means=np.array([[20.0, 30.0, 40.0], [200.0, 210.0, 220.0]]),
        covariances=np.array([25.0 * np.eye(3), 64.0 * np.eye(3)]),
    )
    for _ in range(10):
        color = rng.random(3) * 255.0
        got = gmm_neg_log_density(gmm, color)
        assert got == pytest.approx(direct_neg_log_density(gmm, color), rel=1e-9)
        unweighted = [
            direct_neg_log_density(
                GmmParams(np.array([1.0]), gmm.means[j:j + 1], gmm.covariances[j:j + 1]),
                color)
            for j in range(2)
        ]
        weighted = [u - np.log(w) for u, w in zip(unweighted, gmm.weights)]
        # convex combination of densities; each weighted term bounds it above
        assert min(unweighted) - 1e-9 <= got <= max(unweighted) + 1e-9
        assert got <= min(weighted) + 1e-9


def test_vectorized_matches_scalar(rng):
    samples = rng.random((50, 3)) * 255.0
    gmm = fit_gmm(samples, 3, rng_seed=9)
    colors = rng.random((8, 3)) * 255.0
    batch = gmm_neg_log_density(gmm, colors)
    for i in range(8):
        assert batch[i] == pytest.approx(gmm_neg_log_density(gmm, colors[i]), rel=1e-12)
