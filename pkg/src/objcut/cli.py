"""Batch command-line interface.

Every subcommand is non-interactive, writes only its declared outputs, and is
byte-deterministic for a fixed --seed. Metrics go to stdout as one JSON
object; diagnostics go to stderr. Exit codes: 0 ok, 1 data error, 2 usage.
"""
import argparse
import json
import sys

import numpy as np

from . import array_io, metrics, pipeline
from .array_io import Annotation, AnnotationSet
from .grabcut import GrabCutParams
from .heatmap import objectness, stratify


class UsageError(Exception):
    pass


def _parse_scales(text):
    try:
        scales = [float(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --scales value: {text}") from exc
    if not scales or any(s < 1.0 for s in scales):
        raise UsageError("--scales must list values >= 1.0")
    return scales


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="objcut",
        description="Objectness heatmaps and graph-cut segmentation for files on disk.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, image=False, features=False, annotations=False, out=True, cut=False):
        if features:
            p.add_argument("--features", required=True, help="NPY feature stack")
        if image:
            p.add_argument("--image", help="PPM image")
        if annotations:
            p.add_argument("--annotations", required=True, help="annotation JSON")
        if out:
            p.add_argument("--out", required=True, help="output path")
        if cut:
            p.add_argument("--seed", type=int, default=42)
            p.add_argument("--gmm-k", type=int, default=5)
            p.add_argument("--gamma", type=float, default=50.0)
            p.add_argument("--iters", type=int, default=5)

    p = sub.add_parser("heatmap", help="objectness heatmap as PGM")
    common(p, features=True, image=True)
    p.add_argument("--width", type=int)
    p.add_argument("--height", type=int)

    p = sub.add_parser("trimap", help="stratified trimap as PGM (values 0..3)")
    common(p, features=True, image=True)
    p.add_argument("--width", type=int)
    p.add_argument("--height", type=int)

    p = sub.add_parser("segment", help="foreground mask via graph cut")
    common(p, features=True, image=True, cut=True)

    p = sub.add_parser("instances", help="instance map (PGM16 + JSON table)")
    common(p, features=True, image=True, annotations=True, cut=True)

    p = sub.add_parser("clean", help="drop/tighten annotations by heatmap content")
    common(p, features=True, image=True, annotations=True)
    p.add_argument("--width", type=int)
    p.add_argument("--height", type=int)
    p.add_argument("--drop-threshold", type=float, default=20.0)
    p.add_argument("--dropped-out", help="optional JSON path for dropped boxes")

    p = sub.add_parser("propose", help="multi-scale blob boxes as annotation JSON")
    common(p, features=True, image=True)
    p.add_argument("--width", type=int)
    p.add_argument("--height", type=int)
    p.add_argument("--scales", default="1.0,1.5,2.0")

    p = sub.add_parser("eval-iou", help="mean mask IoU of prediction/truth PGM pairs")
    p.add_argument("--pred", required=True, help="comma-separated mask PGMs")
    p.add_argument("--gt", required=True, help="comma-separated mask PGMs")

    p = sub.add_parser("eval-recall", help="proposal recall against ground truth")
    p.add_argument("--proposals", required=True, help="annotation JSON")
    p.add_argument("--annotations", required=True, help="ground-truth annotation JSON")
    p.add_argument("--iou-threshold", type=float, default=0.9)
    return parser


def _target_dims(args):
    if args.image:
        image = array_io.read_image(args.image)
        return image.shape[0], image.shape[1]
    if args.height is None or args.width is None:
        raise UsageError("need --image or both --height and --width")
    if args.height < 1 or args.width < 1:
        raise UsageError("--height/--width must be positive")
    return args.height, args.width


def _cut_params(args):
    return GrabCutParams(components=args.gmm_k, gamma=args.gamma,
                         max_iters=args.iters, rng_seed=args.seed)


def _emit(obj):
    json.dump(obj, sys.stdout, sort_keys=True)
    sys.stdout.write("\n")


def _cmd_heatmap(args):
    stack = array_io.read_feature_stack(args.features)
    h, w = _target_dims(args)
    array_io.write_mask(array_io.heatmap_to_u8(objectness(stack, h, w)), args.out)


def _cmd_trimap(args):
    stack = array_io.read_feature_stack(args.features)
    h, w = _target_dims(args)
    array_io.write_mask(stratify(objectness(stack, h, w)), args.out)


def _cmd_segment(args):
    if not args.image:
        raise UsageError("segment needs --image")
    stack = array_io.read_feature_stack(args.features)
    image = array_io.read_image(args.image)
    mask = pipeline.localize(image, stack, _cut_params(args))
    array_io.write_mask(mask * np.uint8(255), args.out)


def _cmd_instances(args):
    if not args.image:
        raise UsageError("instances needs --image")
    stack = array_io.read_feature_stack(args.features)
    image = array_io.read_image(args.image)
    detections = array_io.read_annotations(args.annotations)
    imap = pipeline.segment_instances(image, stack, detections, _cut_params(args))
    array_io.write_mask(imap.ids, args.out + ".pgm", maxval=65535)
    table = {
        str(i): {"label": info["label"], "bbox": list(info["bbox"])}
        for i, info in imap.table.items()
    }
    with open(args.out + ".json", "w", encoding="utf-8") as fp:
        json.dump(table, fp, sort_keys=True, separators=(",", ":"))
        fp.write("\n")


def _cmd_clean(args):
    stack = array_io.read_feature_stack(args.features)
    h, w = _target_dims(args)
    annotations = array_io.read_annotations(args.annotations)
    heatmaps = {ann.box: pipeline.box_heatmap(stack, ann.box, h, w)
                for ann in annotations.boxes}
    report = pipeline.clean_annotations(heatmaps, annotations, args.drop_threshold)
    array_io.write_annotations(report.kept, args.out)
    if args.dropped_out:
        array_io.write_annotations(report.dropped, args.dropped_out)
    _emit({"dropped": len(report.dropped), "kept": len(report.kept),
           "tightened": report.tightened_count})


def _cmd_propose(args):
    stack = array_io.read_feature_stack(args.features)
    h, w = _target_dims(args)
    heat = objectness(stack, h, w)
    boxes = pipeline.generate_proposals(heat, _parse_scales(args.scales))
    out = AnnotationSet(image_ref=args.image or "", boxes=[
        Annotation(*box, label="proposal") for box in boxes])
    array_io.write_annotations(out, args.out)


def _cmd_eval_iou(args):
    preds = [s for s in args.pred.split(",") if s]
    gts = [s for s in args.gt.split(",") if s]
    if len(preds) != len(gts) or not preds:
        raise UsageError("--pred and --gt need the same non-zero number of paths")
    pairs = [(array_io.read_mask(p), array_io.read_mask(g)) for p, g in zip(preds, gts)]
    _emit({"mean_iou": metrics.mean_iou(pairs)})


def _cmd_eval_recall(args):
    if not 0.0 < args.iou_threshold <= 1.0:
        raise UsageError("--iou-threshold must be in (0, 1]")
    proposals = [a.box for a in array_io.read_annotations(args.proposals).boxes]
    truth = array_io.read_annotations(args.annotations).boxes
    result = {"recall": metrics.recall_at(
        proposals, [a.box for a in truth], args.iou_threshold)}
    for label in sorted({a.label for a in truth}):
        subset = [a.box for a in truth if a.label == label]
        result[f"recall[{label}]"] = metrics.recall_at(
            proposals, subset, args.iou_threshold)
    _emit(result)


_COMMANDS = {
    "heatmap": _cmd_heatmap,
    "trimap": _cmd_trimap,
    "segment": _cmd_segment,
    "instances": _cmd_instances,
    "clean": _cmd_clean,
    "propose": _cmd_propose,
    "eval-iou": _cmd_eval_iou,
    "eval-recall": _cmd_eval_recall,
}


def run(argv):
    """Parse argv (without the program name) and execute one subcommand."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 2
    try:
        _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
