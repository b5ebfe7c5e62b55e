"""Objectness heatmaps from convolutional feature maps, with graph-cut
segmentation, annotation cleansing, and proposal generation."""

from .array_io import (Annotation, AnnotationSet, FeatureMapStack,
                       read_annotations, read_feature_stack, read_image,
                       read_mask, write_annotations, write_feature_stack,
                       write_image, write_mask)
from .gmm import GmmParams, fit_gmm, gmm_neg_log_density
from .grabcut import GrabCutParams, build_graph, compute_beta, grabcut
from .graphcut import FlowNetwork, max_flow_min_cut
from .heatmap import (bicubic_upscale, normalize, objectness, stratify,
                      sum_activations)
from .metrics import box_iou, mask_iou, mean_iou, recall_at
from .pipeline import (CleansingReport, InstanceMap, box_heatmap,
                       clean_annotations, generate_proposals, localize,
                       segment_instances)
from .regions import Region, binarize, connected_components, largest_region_bbox

__version__ = "0.1.0"

__all__ = [
    "Annotation", "AnnotationSet", "FeatureMapStack", "read_annotations",
    "read_feature_stack", "read_image", "read_mask", "write_annotations",
    "write_feature_stack", "write_image", "write_mask",
    "GmmParams", "fit_gmm", "gmm_neg_log_density",
    "GrabCutParams", "build_graph", "compute_beta", "grabcut",
    "FlowNetwork", "max_flow_min_cut",
    "bicubic_upscale", "normalize", "objectness", "stratify", "sum_activations",
    "box_iou", "mask_iou", "mean_iou", "recall_at",
    "CleansingReport", "InstanceMap", "box_heatmap", "clean_annotations",
    "generate_proposals", "localize", "segment_instances",
    "Region", "binarize", "connected_components", "largest_region_bbox",
    "__version__",
]
