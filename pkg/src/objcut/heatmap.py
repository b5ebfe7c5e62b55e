"""Objectness heatmaps from convolutional feature stacks.

The heatmap is the plain channel sum of a layer's activations, rescaled to
[0, 255] and upscaled to image resolution with Catmull-Rom bicubic
resampling. Stratifying the result by mean intensity yields the trimap that
seeds the segmenter.
"""
import numpy as np

from . import kernels
from .errors import InvalidTarget

# trimap codes
SURE_BG = 0
SURE_FG = 1
PROB_BG = 2
PROB_FG = 3


def sum_activations(stack):
    """Channel-wise sum of a feature stack, as float64 (H', W')."""
    return np.sum(stack.data, axis=0, dtype=np.float64)


def normalize(raw):
    """Affine rescale to [0, 255]; a constant map collapses to all zeros."""
    raw = np.asarray(raw, dtype=np.float64)
    lo = raw.min()
    hi = raw.max()
    if hi == lo:
        return np.zeros_like(raw)
    # multiply before dividing so min/max land on exactly 0 and 255
    return (raw - lo) * 255.0 / (hi - lo)


def bicubic_upscale(grid, target_h, target_w):
    """Separable cubic-convolution upscale (a = -0.5), edge-replicated,
    clamped to [0, 255]. Equal dimensions reproduce the input bit-exactly."""
    grid = np.ascontiguousarray(grid, dtype=np.float64)
    h, w = grid.shape
    if target_h < h or target_w < w:
        raise InvalidTarget(
            f"target {target_h}x{target_w} smaller than source {h}x{w}")
    return kernels.bicubic_upscale(grid, target_h, target_w)


def objectness(stack, image_h, image_w):
    """Objectness heatmap at image resolution: sum, rescale, upscale."""
    return bicubic_upscale(normalize(sum_activations(stack)), image_h, image_w)


def stratify(heatmap):
    """Split a heatmap into trimap labels by mean intensity.

    Above the mean is sure foreground (1); between zero and the mean,
    inclusive, probable foreground (3); exact zeros probable background (2).
    Sure background (0) is never produced.
    """
    heatmap = np.asarray(heatmap, dtype=np.float64)
    mean = heatmap.mean()
    labels = np.where(heatmap == 0.0, PROB_BG,
                      np.where(heatmap > mean, SURE_FG, PROB_FG))
    return labels.astype(np.uint8)
