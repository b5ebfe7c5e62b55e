"""Overlap metrics: box/mask IoU, dataset means, proposal recall."""
import numpy as np

from .errors import DimMismatch, EmptyInput


def box_iou(a, b):
    """Intersection over union of two half-open (x0, y0, x1, y1) boxes."""
    ax0, ay0, ax1, ay1 = a
    bx0, by0, bx1, by1 = b
    iw = min(ax1, bx1) - max(ax0, bx0)
    ih = min(ay1, by1) - max(ay0, by0)
    if iw <= 0 or ih <= 0:
        return 0.0
    inter = iw * ih
    union = (ax1 - ax0) * (ay1 - ay0) + (bx1 - bx0) * (by1 - by0) - inter
    return inter / union


def mask_iou(a, b):
    """IoU of two binary masks; two empty masks count as identical (1.0)."""
    a = np.asarray(a) != 0
    b = np.asarray(b) != 0
    if a.shape != b.shape:
        raise DimMismatch(f"mask shapes differ: {a.shape} vs {b.shape}")
    union = np.logical_or(a, b).sum()
    if union == 0:
        return 1.0
    return float(np.logical_and(a, b).sum() / union)


def mean_iou(pairs):
    pairs = list(pairs)
    if not pairs:
        raise EmptyInput("mean_iou needs at least one mask pair")
    return float(np.mean([mask_iou(a, b) for a, b in pairs]))


def recall_at(proposals, ground_truth, iou_threshold):
    """Fraction of ground-truth boxes covered by some proposal at the given
    IoU threshold. Empty ground truth is vacuously covered (1.0)."""
    if not 0.0 < iou_threshold <= 1.0:
        raise ValueError(f"iou_threshold must be in (0, 1], got {iou_threshold}")
    ground_truth = list(ground_truth)
    if not ground_truth:
        return 1.0
    proposals = list(proposals)
    hits = sum(
        1 for gt in ground_truth
        if any(box_iou(p, gt) >= iou_threshold for p in proposals)
    )
    return hits / len(ground_truth)
