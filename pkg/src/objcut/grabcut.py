"""Iterated graph-cut segmentation seeded by a trimap.

Color models for each side are Gaussian mixtures; the pixel graph carries
contrast-weighted smoothness arcs over 8-neighborhoods and per-pixel terminal
arcs from the mixture densities. Each round reassigns mixture components,
refits them, and re-solves the min cut; hard trimap labels never flip.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateTrimap
from .gmm import (COV_RIDGE, GmmParams, _component_log_densities, fit_gmm,
                  gmm_neg_log_density)
from .graphcut import FlowNetwork, max_flow_min_cut
from .heatmap import PROB_FG, SURE_BG, SURE_FG

_INV_SQRT2 = 1.0 / np.sqrt(2.0)

# (dy, dx, inverse distance) for the four directed neighbor offsets that
# cover every 8-neighbor pair exactly once
_OFFSETS = ((0, 1, 1.0), (1, 0, 1.0), (1, 1, _INV_SQRT2), (1, -1, _INV_SQRT2))


@dataclass
class GrabCutParams:
    components: int = 5
    gamma: float = 50.0
    max_iters: int = 5
    energy_epsilon: float = 1e-3
    rng_seed: int = 42

    def __post_init__(self):
        if self.components < 1 or self.gamma < 0 or self.max_iters < 1 \
                or self.energy_epsilon < 0:
            raise ValueError(f"invalid parameters: {self}")


def _offset_windows(h, w, dy, dx):
    """Index windows (a, b) such that a - b == (dy, dx) for every position."""
    a = (slice(max(dy, 0), h - max(-dy, 0)), slice(max(dx, 0), w - max(-dx, 0)))
    b = (slice(max(-dy, 0), h - max(dy, 0)), slice(max(-dx, 0), w - max(dx, 0)))
    return a, b


def _neighbor_sqdiffs(image):
    """Squared color differences for each directed neighbor offset."""
    img = image.astype(np.float64)
    h, w = img.shape[:2]
    out = []
    for dy, dx, _ in _OFFSETS:
        a, b = _offset_windows(h, w, dy, dx)
        out.append(np.sum((img[a] - img[b]) ** 2, axis=2))
    return out


def compute_beta(image):
    """Contrast scale: 1 / (2 * mean squared 8-neighbor color difference).

    Zero for a constant image, so smoothness arcs degrade to gamma/dist.
    """
    sqdiffs = _neighbor_sqdiffs(image)
    total = sum(float(d.sum()) for d in sqdiffs)
    count = sum(d.size for d in sqdiffs)
    if total <= 0.0:
        return 0.0
    return 1.0 / (2.0 * total / count)


def _smoothness_arcs(image, beta, gamma):
    """Undirected n-link endpoints (p, q) and capacities."""
    h, w = image.shape[:2]
    ids = np.arange(h * w, dtype=np.int64).reshape(h, w)
    pairs_p, pairs_q, caps = [], [], []
    for (dy, dx, inv_dist), sqd in zip(_OFFSETS, _neighbor_sqdiffs(image)):
        a, b = _offset_windows(h, w, dy, dx)
        pairs_p.append(ids[a].ravel())
        pairs_q.append(ids[b].ravel())
        caps.append(gamma * inv_dist * np.exp(-beta * sqd.ravel()))
    return np.concatenate(pairs_p), np.concatenate(pairs_q), np.concatenate(caps)


def _terminal_costs(pixels, fg_gmm, bg_gmm):
    """Data terms, shifted by a shared constant so capacities are >= 0."""
    d_fg = gmm_neg_log_density(fg_gmm, pixels)
    d_bg = gmm_neg_log_density(bg_gmm, pixels)
    shift = min(0.0, float(d_fg.min()), float(d_bg.min()))
    return d_fg - shift, d_bg - shift


def build_graph(image, trimap, fg_gmm, bg_gmm, gamma):
    """Pixel flow network. Source side means foreground.

    Source->pixel arcs carry the background cost (paid when the pixel lands
    background), pixel->sink arcs the foreground cost. Hard trimap labels get
    an unbeatable terminal arc instead. All capacities share one additive
    shift that keeps them non-negative without changing the optimal cut.
    """
    h, w = image.shape[:2]
    if trimap.shape != (h, w):
        raise ValueError(f"trimap shape {trimap.shape} != image {h}x{w}")
    n = h * w
    net = FlowNetwork(n + 2, source=n, sink=n + 1)

    pixels = image.reshape(-1, 3).astype(np.float64)
    d_fg, d_bg = _terminal_costs(pixels, fg_gmm, bg_gmm)
    flat = trimap.ravel()
    big = 1e9 * gamma + float(max(d_fg.max(), d_bg.max()))
    src_cap = np.where(flat == SURE_FG, big, d_bg)
    snk_cap = np.where(flat == SURE_BG, big, d_fg)

    ids = np.arange(n, dtype=np.int64)
    net.add_arcs(np.full(n, n, dtype=np.int64), ids, src_cap)
    net.add_arcs(ids, np.full(n, n + 1, dtype=np.int64), snk_cap)

    beta = compute_beta(image)
    p, q, caps = _smoothness_arcs(image, beta, gamma)
    net.add_arcs(p, q, caps)
    net.add_arcs(q, p, caps)
    return net


def _side_energy(pixels, gmms, fg):
    d_fg = gmm_neg_log_density(gmms[0], pixels)
    d_bg = gmm_neg_log_density(gmms[1], pixels)
    return float(np.where(fg, d_fg, d_bg).sum())


def _refit(samples, assign, gmm):
    """Hard-assignment refit of mixture weights, means, covariances."""
    k = gmm.n_components
    d = samples.shape[1]
    weights = np.zeros(k)
    means = gmm.means.copy()
    covariances = gmm.covariances.copy()
    n = samples.shape[0]
    for j in range(k):
        sel = assign == j
        cnt = int(sel.sum())
        weights[j] = cnt / n
        if cnt == 0:
            continue
        means[j] = samples[sel].mean(axis=0)
        diff = samples[sel] - means[j]
        covariances[j] = diff.T @ diff / cnt + COV_RIDGE * np.eye(d)
    return GmmParams(weights=weights, means=means, covariances=covariances)


def _best_component(samples, gmm):
    with np.errstate(divide="ignore"):
        scores = _component_log_densities(samples, gmm.means, gmm.covariances) \
            + np.log(gmm.weights)
    return np.argmax(scores, axis=1)


def _safeguarded_refit(samples, gmm):
    """Hard-assignment refit, accepted only if it does not worsen the side's
    data term. Rejecting the rare bad update keeps the total energy monotone
    even though the cut works with mixture densities."""
    candidate = _refit(samples, _best_component(samples, gmm), gmm)
    if gmm_neg_log_density(candidate, samples).sum() \
            <= gmm_neg_log_density(gmm, samples).sum():
        return candidate
    return gmm


def grabcut(image, trimap, params=None, return_trace=False):
    """Segment image into a {0,1} foreground mask guided by the trimap.

    Raises DegenerateTrimap unless the trimap has at least one foreground
    pixel (label 1 or 3) and one background pixel (label 0 or 2). With
    return_trace=True also returns the per-iteration total energies.
    """
    params = params or GrabCutParams()
    h, w = image.shape[:2]
    if trimap.shape != (h, w):
        raise ValueError(f"trimap shape {trimap.shape} != image {h}x{w}")
    flat = trimap.ravel()
    fg = (flat == SURE_FG) | (flat == PROB_FG)
    if not fg.any() or fg.all():
        raise DegenerateTrimap("trimap must contain both foreground and background seeds")
    hard_fg = flat == SURE_FG
    hard_bg = flat == SURE_BG
    soft = ~(hard_fg | hard_bg)

    pixels = image.reshape(-1, 3).astype(np.float64)
    k = params.components
    fg_gmm = fit_gmm(pixels[fg], min(k, int(fg.sum())), params.rng_seed)
    bg_gmm = fit_gmm(pixels[~fg], min(k, int((~fg).sum())), params.rng_seed + 1)

    beta = compute_beta(image)
    pair_p, pair_q, pair_cap = _smoothness_arcs(image, beta, params.gamma)

    energies = []
    prev_energy = np.inf
    for _ in range(params.max_iters):
        if not fg.any() or fg.all():
            break  # a cut claimed everything; no samples left to model the other side
        fg_gmm = _safeguarded_refit(pixels[fg], fg_gmm)
        bg_gmm = _safeguarded_refit(pixels[~fg], bg_gmm)

        d_fg, d_bg = _terminal_costs(pixels, fg_gmm, bg_gmm)
        n = h * w
        net = FlowNetwork(n + 2, source=n, sink=n + 1)
        big = 1e9 * params.gamma + float(max(d_fg.max(), d_bg.max()))
        ids = np.arange(n, dtype=np.int64)
        net.add_arcs(np.full(n, n, dtype=np.int64), ids,
                     np.where(hard_fg, big, d_bg))
        net.add_arcs(ids, np.full(n, n + 1, dtype=np.int64),
                     np.where(hard_bg, big, d_fg))
        net.add_arcs(pair_p, pair_q, pair_cap)
        net.add_arcs(pair_q, pair_p, pair_cap)
        _, source_side = max_flow_min_cut(net)

        fg = np.where(soft, source_side[:n], fg)
        fg[hard_fg] = True
        fg[hard_bg] = False

        cross = fg[pair_p] != fg[pair_q]
        energy = _side_energy(pixels, (fg_gmm, bg_gmm), fg) + float(pair_cap[cross].sum())
        energies.append(energy)
        if np.isfinite(prev_energy) and prev_energy - energy < params.energy_epsilon * abs(prev_energy):
            break
        prev_energy = energy

    mask = fg.reshape(h, w).astype(np.uint8)
    if return_trace:
        return mask, np.array(energies)
    return mask
