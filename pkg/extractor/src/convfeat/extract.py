"""Run the backbone on images and export activations as NPY + sidecar.

The output format matches the segmentation toolkit's feature-stack contract:
NPY v1.0, little-endian float32, C-order, shape (channels, height, width),
with a `<stem>.meta.json` sidecar naming the layer and the source image.
"""
import json
import os
from dataclasses import dataclass, field

import numpy as np
import torch

from .model import build_backbone

# standard ImageNet-classification preprocessing
_MEAN = np.array([0.485, 0.456, 0.406], dtype=np.float32)
_STD = np.array([0.229, 0.224, 0.225], dtype=np.float32)

_IMAGE_EXTENSIONS = (".ppm", ".png", ".jpg", ".jpeg", ".bmp")


@dataclass
class ExtractionRequest:
    images: list[str]
    model_name: str = "vgg16"
    layer_name: str = "conv5_3"
    out_dir: str = "."
    weights_path: str | None = None
    random_init: bool = False
    seed: int = 0
    extras: dict = field(default_factory=dict)


def _read_ppm(path):
    with open(path, "rb") as fp:
        if fp.read(2) != b"P6":
            raise ValueError(f"{path}: not a binary PPM")
        tokens = []
        while len(tokens) < 3:
            chunk = fp.read(1)
            if not chunk:
                raise ValueError(f"{path}: truncated header")
            if chunk.isspace():
                continue
            token = chunk
            while True:
                c = fp.read(1)
                if not c or c.isspace():
                    break
                token += c
            tokens.append(int(token))
        width, height, maxval = tokens
        if maxval != 255:
            raise ValueError(f"{path}: unsupported maxval {maxval}")
        data = fp.read(width * height * 3)
    if len(data) != width * height * 3:
        raise ValueError(f"{path}: truncated payload")
    return np.frombuffer(data, np.uint8).reshape(height, width, 3)


def load_image(path):
    """(H, W, 3) uint8 array from a PPM, or anything Pillow can open."""
    if path.lower().endswith(".ppm"):
        return _read_ppm(path)
    from PIL import Image
    with Image.open(path) as img:
        return np.asarray(img.convert("RGB"))


def preprocess(image):
    scaled = image.astype(np.float32) / 255.0
    normed = (scaled - _MEAN) / _STD
    return torch.from_numpy(normed.transpose(2, 0, 1)).unsqueeze(0)


def _write_npy(path, array):
    header = {
        "descr": "<f4",
        "fortran_order": False,
        "shape": tuple(int(s) for s in array.shape),
    }
    with open(path, "wb") as fp:
        np.lib.format.write_array_header_1_0(fp, header)
        fp.write(np.ascontiguousarray(array, dtype="<f4").tobytes())


def extract(request):
    """Extract one feature stack per image; returns the NPY paths written."""
    backbone, stride = build_backbone(
        request.model_name, request.layer_name,
        weights_path=request.weights_path,
        random_init=request.random_init, seed=request.seed)
    os.makedirs(request.out_dir, exist_ok=True)
    written = []
    for image_path in request.images:
        image = load_image(image_path)
        with torch.no_grad():
            activations = backbone(preprocess(image))
        stack = activations.squeeze(0).numpy().astype(np.float32)
        stem = os.path.splitext(os.path.basename(image_path))[0]
        npy_path = os.path.join(request.out_dir, stem + ".npy")
        _write_npy(npy_path, stack)
        meta = {
            "layer_name": request.layer_name,
            "source_image": os.path.basename(image_path),
            "stride": stride,
        }
        with open(os.path.join(request.out_dir, stem + ".meta.json"), "w",
                  encoding="utf-8") as fp:
            json.dump(meta, fp, sort_keys=True)
            fp.write("\n")
        written.append(npy_path)
    return written


def list_images(path):
    """Expand a file or directory into a sorted list of image paths."""
    if os.path.isdir(path):
        return sorted(
            os.path.join(path, name) for name in os.listdir(path)
            if name.lower().endswith(_IMAGE_EXTENSIONS))
    return [path]
