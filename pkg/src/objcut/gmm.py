"""Gaussian mixture fitting for color models.

Seeding is k-means++ followed by a short Lloyd run, then full-covariance EM.
Covariances always carry a +1e-3*I ridge so densities stay finite on flat
color regions.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientSamples

COV_RIDGE = 1e-3
EM_MAX_ITERS = 100
EM_REL_TOL = 1e-6
KMEANS_ITERS = 10
_LOG_2PI = np.log(2.0 * np.pi)


@dataclass
class GmmParams:
    weights: np.ndarray      # (K,), sums to 1
    means: np.ndarray        # (K, D)
    covariances: np.ndarray  # (K, D, D), symmetric positive-definite
    ll_history: np.ndarray = field(default=None, repr=False, compare=False)

    @property
    def n_components(self):
        return self.weights.shape[0]


def _component_log_densities(samples, means, covariances):
    """log N(x; mu_k, Sigma_k) for every sample and component, shape (N, K)."""
    n, d = samples.shape
    k = means.shape[0]
    out = np.empty((n, k))
    for j in range(k):
        chol = np.linalg.cholesky(covariances[j])
        diff = samples - means[j]
        sol = np.linalg.solve(chol, diff.T)
        maha = np.sum(sol * sol, axis=0)
        logdet = 2.0 * np.sum(np.log(np.diag(chol)))
        out[:, j] = -0.5 * (d * _LOG_2PI + logdet + maha)
    return out


def _log_mixture_density(gmm, samples):
    with np.errstate(divide="ignore"):  # weight 0 -> log 0 = -inf, handled below
        logw = np.log(gmm.weights)
    joint = _component_log_densities(samples, gmm.means, gmm.covariances) + logw
    top = np.max(joint, axis=1, keepdims=True)
    return (top + np.log(np.sum(np.exp(joint - top), axis=1, keepdims=True))).ravel()


def gmm_neg_log_density(gmm, colors):
    """Negative log mixture density; scalar for one color, array for many."""
    colors = np.asarray(colors, dtype=np.float64)
    single = colors.ndim == 1
    samples = colors.reshape(1, -1) if single else colors
    val = -_log_mixture_density(gmm, samples)
    return float(val[0]) if single else val


def _kmeans_pp(samples, k, rng):
    n = samples.shape[0]
    centers = np.empty((k, samples.shape[1]))
    centers[0] = samples[rng.integers(n)]
    d2 = np.sum((samples - centers[0]) ** 2, axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total <= 0.0:
            centers[j] = samples[rng.integers(n)]
        else:
            centers[j] = samples[rng.choice(n, p=d2 / total)]
        d2 = np.minimum(d2, np.sum((samples - centers[j]) ** 2, axis=1))
    return centers


def _assign(samples, centers):
    d2 = np.sum((samples[:, None, :] - centers[None, :, :]) ** 2, axis=2)
    return np.argmin(d2, axis=1)


def fit_gmm(samples, n_components, rng_seed):
    """EM-fit a mixture to color samples; deterministic for a fixed seed.

    Raises InsufficientSamples when there are fewer samples than components.
    The fitted params carry the per-iteration log-likelihood trace in
    ll_history (non-decreasing by EM construction).
    """
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim != 2:
        raise ValueError(f"expected (N, D) samples, got shape {samples.shape}")
    n, d = samples.shape
    if n < n_components:
        raise InsufficientSamples(f"{n} samples for {n_components} components")
    rng = np.random.default_rng(rng_seed)

    centers = _kmeans_pp(samples, n_components, rng)
    for _ in range(KMEANS_ITERS):
        assign = _assign(samples, centers)
        for j in range(n_components):
            sel = assign == j
            if sel.any():
                centers[j] = samples[sel].mean(axis=0)

    assign = _assign(samples, centers)
    weights = np.zeros(n_components)
    means = centers.copy()
    covariances = np.empty((n_components, d, d))
    global_cov = np.cov(samples.T, bias=True).reshape(d, d)
    for j in range(n_components):
        sel = assign == j
        weights[j] = sel.sum() / n
        if sel.any():
            means[j] = samples[sel].mean(axis=0)
            diff = samples[sel] - means[j]
            covariances[j] = diff.T @ diff / sel.sum()
        else:
            covariances[j] = global_cov
        covariances[j] += COV_RIDGE * np.eye(d)

    history = []
    prev_ll = -np.inf
    for _ in range(EM_MAX_ITERS):
        with np.errstate(divide="ignore"):
            logw = np.log(weights)
        joint = _component_log_densities(samples, means, covariances) + logw
        top = np.max(joint, axis=1, keepdims=True)
        log_norm = top + np.log(np.sum(np.exp(joint - top), axis=1, keepdims=True))
        ll = float(log_norm.sum())
        history.append(ll)
        if np.isfinite(prev_ll) and abs(ll - prev_ll) < EM_REL_TOL * abs(prev_ll):
            break
        prev_ll = ll

        resp = np.exp(joint - log_norm)
        bulk = resp.sum(axis=0)
        for j in range(n_components):
            if bulk[j] < 1e-12:
                continue  # dead component: keep previous parameters
            means[j] = resp[:, j] @ samples / bulk[j]
            diff = samples - means[j]
            covariances[j] = (resp[:, j] * diff.T) @ diff / bulk[j] + COV_RIDGE * np.eye(d)
        weights = bulk / n

    return GmmParams(weights=weights, means=means, covariances=covariances,
                     ll_history=np.array(history))
