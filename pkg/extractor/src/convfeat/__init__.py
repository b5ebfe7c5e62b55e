"""Export intermediate convolutional activations as NPY feature stacks."""

from .extract import ExtractionRequest, extract, list_images, load_image
from .model import LayerNotFound, build_backbone

__version__ = "0.1.0"

__all__ = [
    "ExtractionRequest", "extract", "list_images", "load_image",
    "LayerNotFound", "build_backbone", "__version__",
]
