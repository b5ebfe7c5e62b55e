"""High-level tasks: localization, instance composition, annotation
cleansing, and proposal generation."""
from dataclasses import dataclass, field

import numpy as np

from .array_io import Annotation, AnnotationSet, FeatureMapStack
from .errors import DegenerateTrimap, InvalidAnnotation, InvalidThreshold
from .grabcut import GrabCutParams, grabcut
from .heatmap import (PROB_BG, SURE_BG, bicubic_upscale, normalize,
                      objectness, stratify, sum_activations)
from .regions import binarize, connected_components, largest_region_bbox


@dataclass
class InstanceMap:
    """Per-pixel instance ids (0 = background) plus an id -> info table."""
    ids: np.ndarray
    table: dict[int, dict] = field(default_factory=dict)

    @property
    def height(self):
        return self.ids.shape[0]

    @property
    def width(self):
        return self.ids.shape[1]


@dataclass
class CleansingReport:
    kept: AnnotationSet
    dropped: AnnotationSet
    tightened_count: int


def _segment_heatmap(image, heat, params):
    trimap = stratify(heat)
    if not ((trimap == SURE_BG) | (trimap == PROB_BG)).any():
        # heatmap claims foreground everywhere: nothing to cut against
        return np.ones(image.shape[:2], dtype=np.uint8)
    return grabcut(image, trimap, params)


def localize(image, stack, params=None):
    """Foreground mask for the dominant objects in the image."""
    h, w = image.shape[:2]
    heat = objectness(stack, h, w)
    return _segment_heatmap(image, heat, params or GrabCutParams())


def _check_box_in_image(box, h, w):
    x0, y0, x1, y1 = box
    if x0 < 0 or y0 < 0 or x1 > w or y1 > h:
        raise InvalidAnnotation(f"box {box} outside {w}x{h} image")


def box_heatmap(stack, box, image_h, image_w):
    """Heatmap for one box, from a full-image stack.

    The raw (pre-rescale) channel sum is cropped proportionally at feature
    resolution, then rescaled and upscaled to the box size. Avoids needing a
    separate feature pass per box.
    """
    _check_box_in_image(box, image_h, image_w)
    x0, y0, x1, y1 = box
    raw = sum_activations(stack)
    fh, fw = raw.shape
    fy0 = int(np.floor(y0 * fh / image_h))
    fy1 = max(fy0 + 1, int(np.ceil(y1 * fh / image_h)))
    fx0 = int(np.floor(x0 * fw / image_w))
    fx1 = max(fx0 + 1, int(np.ceil(x1 * fw / image_w)))
    # a crop can't outgrow the box it upscales into
    fy1 = min(fy1, fy0 + (y1 - y0), fh)
    fx1 = min(fx1, fx0 + (x1 - x0), fw)
    crop = raw[fy0:fy1, fx0:fx1]
    return bicubic_upscale(normalize(crop), y1 - y0, x1 - x0)


def _resolve_stack(stacks, box, image_h, image_w):
    if isinstance(stacks, FeatureMapStack):
        return box_heatmap(stacks, box, image_h, image_w)
    stack = stacks[box]
    return bicubic_upscale(normalize(sum_activations(stack)),
                           box[3] - box[1], box[2] - box[0])


def segment_instances(image, stacks, detections, params=None):
    """Compose per-detection segmentations into one instance map.

    stacks is either one full-image FeatureMapStack (cropped per box) or a
    mapping from box tuples to per-crop stacks. Masks are painted in
    decreasing area order so smaller instances end up on top; ids run 1..N
    in painting order.
    """
    params = params or GrabCutParams()
    h, w = image.shape[:2]
    entries = []
    for index, ann in enumerate(detections.boxes):
        box = ann.box
        _check_box_in_image(box, h, w)
        heat = _resolve_stack(stacks, box, h, w)
        crop = image[box[1]:box[3], box[0]:box[2]]
        try:
            mask = _segment_heatmap(crop, heat, params)
        except DegenerateTrimap:
            # featureless crop: contributes no foreground
            mask = np.zeros(crop.shape[:2], dtype=np.uint8)
        entries.append((int(mask.sum()), ann, index, mask))

    # larger masks first; smaller bbox area then lower index paint later
    def order(entry):
        area, ann, index, _ = entry
        bbox_area = (ann.x1 - ann.x0) * (ann.y1 - ann.y0)
        return (-area, -bbox_area, -index)

    entries.sort(key=order)
    ids = np.zeros((h, w), dtype=np.uint16)
    table = {}
    for instance_id, (_, ann, _, mask) in enumerate(entries, start=1):
        window = ids[ann.y0:ann.y1, ann.x0:ann.x1]
        window[mask == 1] = instance_id
        table[instance_id] = {"label": ann.label, "bbox": ann.box}
    return InstanceMap(ids=ids, table=table)


def clean_annotations(heatmaps, annotations, intensity_threshold):
    """Drop boxes whose heatmap peaks below the threshold; tighten the rest
    to the largest blob's bbox (never enlarging the original box)."""
    if not 0.0 <= intensity_threshold <= 255.0:
        raise InvalidThreshold(f"threshold {intensity_threshold} outside [0, 255]")
    kept, dropped = [], []
    tightened = 0
    for ann in annotations.boxes:
        heat = heatmaps[ann.box]
        if float(np.max(heat)) < intensity_threshold:
            dropped.append(ann)
            continue
        blob = largest_region_bbox(heat)
        if blob is None:
            kept.append(ann)
            continue
        bx0, by0, bx1, by1 = blob
        new_box = (max(ann.x0, ann.x0 + bx0), max(ann.y0, ann.y0 + by0),
                   min(ann.x1, ann.x0 + bx1), min(ann.y1, ann.y0 + by1))
        if new_box != ann.box:
            tightened += 1
        kept.append(Annotation(*new_box, label=ann.label, score=ann.score))
    return CleansingReport(
        kept=AnnotationSet(image_ref=annotations.image_ref, boxes=kept),
        dropped=AnnotationSet(image_ref=annotations.image_ref, boxes=dropped),
        tightened_count=tightened,
    )


def _round_half_up(v):
    return int(np.floor(v + 0.5))


def generate_proposals(heatmap, scales=(1.0, 1.5, 2.0)):
    """Boxes around above-mean blobs at several center-preserving scales,
    clipped to the heatmap bounds and deduplicated."""
    scales = list(scales)
    if not scales:
        raise ValueError("scales must be non-empty")
    heatmap = np.asarray(heatmap, dtype=np.float64)
    h, w = heatmap.shape
    blobs = connected_components(binarize(heatmap, heatmap.mean()), connectivity=8)
    seen = set()
    proposals = []
    for region in blobs:
        x0, y0, x1, y1 = region.bbox
        cx, cy = (x0 + x1) / 2.0, (y0 + y1) / 2.0
        for s in sorted(scales):
            half_w, half_h = (x1 - x0) * s / 2.0, (y1 - y0) * s / 2.0
            box = (max(0, _round_half_up(cx - half_w)),
                   max(0, _round_half_up(cy - half_h)),
                   min(w, _round_half_up(cx + half_w)),
                   min(h, _round_half_up(cy + half_h)))
            if box[0] < box[2] and box[1] < box[3] and box not in seen:
                seen.add(box)
                proposals.append(box)
    return proposals
