"""Binary-mask analysis: thresholding, connected components, blob boxes."""
from dataclasses import dataclass

import numpy as np

from . import kernels


@dataclass
class Region:
    """One connected blob: pixel count, tight half-open bbox, (y, x) pixels."""
    area: int
    bbox: tuple[int, int, int, int]  # (x0, y0, x1, y1)
    pixels: np.ndarray


def binarize(heatmap, threshold):
    """1 where the value is strictly above the threshold."""
    return (np.asarray(heatmap) > threshold).astype(np.uint8)


def connected_components(mask, connectivity=8):
    """Connected regions of the 1-pixels, largest area first.

    Ties are broken by bbox top-left (y0, then x0) ascending so the output
    order is deterministic.
    """
    if connectivity not in (4, 8):
        raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")
    mask = np.ascontiguousarray(mask, dtype=np.uint8)
    labels, count = kernels.label_components(mask, connectivity)
    if count == 0:
        return []
    # group pixels by label in one pass; raster order within each region
    w = mask.shape[1]
    flat = labels.ravel()
    idx = np.flatnonzero(flat)
    order = np.argsort(flat[idx], kind="stable")
    idx = idx[order]
    bounds = np.searchsorted(flat[idx], np.arange(1, count + 2))
    regions = []
    for lab in range(count):
        sel = idx[bounds[lab]:bounds[lab + 1]]
        ys, xs = np.divmod(sel, w)
        bbox = (int(xs.min()), int(ys.min()), int(xs.max()) + 1, int(ys.max()) + 1)
        regions.append(Region(area=len(sel), bbox=bbox,
                              pixels=np.column_stack((ys, xs))))
    regions.sort(key=lambda r: (-r.area, r.bbox[1], r.bbox[0]))
    return regions


def largest_region_bbox(heatmap):
    """Tight bbox of the largest above-mean blob, or None if there is none."""
    heatmap = np.asarray(heatmap, dtype=np.float64)
    mask = binarize(heatmap, heatmap.mean())
    regions = connected_components(mask, connectivity=8)
    if not regions:
        return None
    return regions[0].bbox
