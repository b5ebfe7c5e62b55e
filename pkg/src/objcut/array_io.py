"""File formats: NPY feature stacks, PPM/PGM rasters, annotation JSON.

Everything here is deterministic: writing the same value twice produces
byte-identical files, and write -> read is lossless.
"""
import json
import os
from dataclasses import dataclass, field

import numpy as np
import numpy.lib.format as _npfmt

from .errors import FormatError, InvalidAnnotation, InvalidData, UnsupportedLayout

NPY_MAGIC = b"\x93NUMPY"


@dataclass
class FeatureMapStack:
    """Per-channel activations of one convolutional layer for one image.

    data is float32, shape (channels, height, width), C-order, all finite.
    """
    data: np.ndarray
    layer_name: str = "unknown"
    source_image: str = ""

    def __post_init__(self):
        self.data = np.ascontiguousarray(self.data, dtype=np.float32)
        if self.data.ndim != 3 or min(self.data.shape) < 1:
            raise InvalidData(f"expected 3-D (C,H,W) stack, got shape {self.data.shape}")
        if not np.isfinite(self.data).all():
            raise InvalidData("feature stack contains NaN or Inf")

    @property
    def channels(self):
        return self.data.shape[0]

    @property
    def height(self):
        return self.data.shape[1]

    @property
    def width(self):
        return self.data.shape[2]


@dataclass
class Annotation:
    """Axis-aligned box with half-open integer pixel coordinates."""
    x0: int
    y0: int
    x1: int
    y1: int
    label: str = ""
    score: float | None = None

    def __post_init__(self):
        if not (0 <= self.x0 < self.x1 and 0 <= self.y0 < self.y1):
            raise InvalidAnnotation(
                f"degenerate box ({self.x0},{self.y0},{self.x1},{self.y1})")

    @property
    def box(self):
        return (self.x0, self.y0, self.x1, self.y1)


@dataclass
class AnnotationSet:
    image_ref: str = ""
    boxes: list[Annotation] = field(default_factory=list)

    def __len__(self):
        return len(self.boxes)


def _meta_path(path):
    stem, _ = os.path.splitext(path)
    return stem + ".meta.json"


def read_feature_stack(path):
    """Load a feature stack from a restricted-profile NPY v1.0 file.

    Only little-endian float32, C-order, 3-D arrays are accepted. Metadata is
    taken from the optional `<stem>.meta.json` sidecar.
    """
    with open(path, "rb") as fp:
        magic = fp.read(len(NPY_MAGIC))
        if magic != NPY_MAGIC:
            raise FormatError(f"{path}: not an NPY file")
        version = fp.read(2)
        if version != b"\x01\x00":
            raise FormatError(f"{path}: unsupported NPY version {tuple(version)}")
        try:
            shape, fortran_order, dtype = _npfmt.read_array_header_1_0(fp)
        except ValueError as exc:
            raise FormatError(f"{path}: bad NPY header: {exc}") from exc
        if fortran_order:
            raise UnsupportedLayout(f"{path}: column-major arrays are not supported")
        if dtype != np.dtype("<f4"):
            raise InvalidData(f"{path}: dtype must be <f4, got {dtype}")
        if len(shape) != 3:
            raise InvalidData(f"{path}: shape must be 3-D (C,H,W), got {shape}")
        data = np.fromfile(fp, dtype=np.dtype("<f4"), count=int(np.prod(shape)))
    if data.size != int(np.prod(shape)):
        raise FormatError(f"{path}: truncated payload")
    data = data.reshape(shape)
    if not np.isfinite(data).all():
        raise InvalidData(f"{path}: payload contains NaN or Inf")
    layer_name, source_image = "unknown", ""
    meta = _meta_path(path)
    if os.path.exists(meta):
        with open(meta, encoding="utf-8") as fp:
            info = json.load(fp)
        layer_name = info.get("layer_name", "unknown")
        source_image = info.get("source_image", "")
    return FeatureMapStack(data, layer_name=layer_name, source_image=source_image)


def write_feature_stack(stack, path):
    """Write stack as NPY v1.0 (<f4, C-order) plus its metadata sidecar."""
    if not np.isfinite(stack.data).all():
        raise InvalidData("feature stack contains NaN or Inf")
    header = {
        "descr": "<f4",
        "fortran_order": False,
        "shape": tuple(int(s) for s in stack.data.shape),
    }
    with open(path, "wb") as fp:
        _npfmt.write_array_header_1_0(fp, header)
        fp.write(np.ascontiguousarray(stack.data, dtype="<f4").tobytes())
    meta = {"layer_name": stack.layer_name, "source_image": stack.source_image}
    with open(_meta_path(path), "w", encoding="utf-8") as fp:
        json.dump(meta, fp, sort_keys=True)
        fp.write("\n")


def _read_pnm_header(fp, magic, path):
    got = fp.read(2)
    if got != magic:
        raise FormatError(f"{path}: expected {magic.decode()} file, got {got!r}")

    def token():
        chars = []
        while True:
            ch = fp.read(1)
            if not ch:
                raise FormatError(f"{path}: truncated header")
            if ch.isspace():
                if chars:
                    return b"".join(chars)
                continue
            chars.append(ch)

    try:
        width, height, maxval = int(token()), int(token()), int(token())
    except ValueError as exc:
        raise FormatError(f"{path}: malformed header") from exc
    if width < 1 or height < 1:
        raise FormatError(f"{path}: non-positive dimensions")
    return width, height, maxval


def read_image(path):
    """Read a binary PPM (P6, maxval 255) as a (H, W, 3) uint8 array."""
    with open(path, "rb") as fp:
        width, height, maxval = _read_pnm_header(fp, b"P6", path)
        if maxval != 255:
            raise FormatError(f"{path}: only maxval 255 supported, got {maxval}")
        payload = fp.read(width * height * 3)
    if len(payload) != width * height * 3:
        raise FormatError(f"{path}: payload does not match header dimensions")
    return np.frombuffer(payload, dtype=np.uint8).reshape(height, width, 3).copy()


def write_image(image, path):
    image = np.asarray(image, dtype=np.uint8)
    if image.ndim != 3 or image.shape[2] != 3:
        raise InvalidData(f"expected (H,W,3) image, got shape {image.shape}")
    h, w = image.shape[:2]
    with open(path, "wb") as fp:
        fp.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        fp.write(image.tobytes())


def read_mask(path):
    """Read a binary PGM (P5). Returns uint8 (maxval 255) or uint16 (maxval 65535)."""
    with open(path, "rb") as fp:
        width, height, maxval = _read_pnm_header(fp, b"P5", path)
        if maxval == 255:
            dtype, nbytes = np.uint8, width * height
        elif maxval == 65535:
            dtype, nbytes = np.dtype(">u2"), width * height * 2
        else:
            raise FormatError(f"{path}: unsupported maxval {maxval}")
        payload = fp.read(nbytes)
    if len(payload) != nbytes:
        raise FormatError(f"{path}: payload does not match header dimensions")
    grid = np.frombuffer(payload, dtype=dtype).reshape(height, width)
    return grid.astype(np.uint16) if maxval == 65535 else grid.copy()


def write_mask(grid, path, maxval=None):
    """Write a 2-D uint grid as binary PGM.

    maxval may be 255, 65535, or None to pick the smallest that fits the
    values. Id maps should pass 65535 explicitly so the format does not
    depend on how many instances happen to exist.
    """
    grid = np.asarray(grid)
    if grid.ndim != 2 or grid.dtype.kind not in "ui":
        raise InvalidData(f"expected 2-D unsigned grid, got {grid.dtype} {grid.shape}")
    peak = int(grid.max(initial=0))
    if maxval is None:
        maxval = 255 if peak <= 255 else 65535
    if maxval not in (255, 65535) or peak > maxval:
        raise InvalidData(f"values up to {peak} not representable at maxval {maxval}")
    h, w = grid.shape
    dtype = np.uint8 if maxval == 255 else np.dtype(">u2")
    with open(path, "wb") as fp:
        fp.write(f"P5\n{w} {h}\n{maxval}\n".encode("ascii"))
        fp.write(grid.astype(dtype).tobytes())


def heatmap_to_u8(heatmap):
    """Quantize a [0,255] heatmap for PGM export, rounding half away from zero."""
    return np.floor(np.asarray(heatmap, dtype=np.float64) + 0.5).astype(np.uint8)


def read_annotations(path):
    with open(path, encoding="utf-8") as fp:
        try:
            payload = json.load(fp)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(payload, dict) or "boxes" not in payload:
        raise FormatError(f"{path}: missing 'boxes' key")
    boxes = []
    for raw in payload["boxes"]:
        try:
            boxes.append(Annotation(
                x0=int(raw["x0"]), y0=int(raw["y0"]),
                x1=int(raw["x1"]), y1=int(raw["y1"]),
                label=str(raw.get("label", "")),
                score=None if raw.get("score") is None else float(raw["score"]),
            ))
        except KeyError as exc:
            raise FormatError(f"{path}: box missing key {exc}") from exc
    return AnnotationSet(image_ref=str(payload.get("image", "")), boxes=boxes)


def write_annotations(annotations, path):
    boxes = []
    for b in annotations.boxes:
        entry = {"x0": b.x0, "y0": b.y0, "x1": b.x1, "y1": b.y1, "label": b.label}
        if b.score is not None:
            entry["score"] = b.score
        boxes.append(entry)
    with open(path, "w", encoding="utf-8") as fp:
        json.dump({"image": annotations.image_ref, "boxes": boxes}, fp,
                  sort_keys=True, separators=(",", ":"))
        fp.write("\n")
