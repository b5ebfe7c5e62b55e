import argparse
import sys

from .extract import ExtractionRequest, extract, list_images
from .model import LayerNotFound


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="convfeat",
        description="Export a conv layer's activations as NPY feature stacks.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("extract", help="one NPY + meta sidecar per image")
    p.add_argument("--images", required=True, help="image file or directory")
    p.add_argument("--layer", default="conv5_3")
    p.add_argument("--model", default="vgg16")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--weights", help="state-dict file (otherwise torchvision download)")
    p.add_argument("--random-weights", action="store_true",
                   help="seeded random init instead of pretrained weights")
    p.add_argument("--seed", type=int, default=0)
    return parser


def run(argv):
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 2
    images = list_images(args.images)
    if not images:
        print(f"error: no images found under {args.images}", file=sys.stderr)
        return 1
    request = ExtractionRequest(
        images=images, model_name=args.model, layer_name=args.layer,
        out_dir=args.out, weights_path=args.weights,
        random_init=args.random_weights, seed=args.seed)
    try:
        written = extract(request)
    except LayerNotFound as exc:
        print(f"error: LayerNotFound: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
