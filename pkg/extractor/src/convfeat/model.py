"""Backbone construction and named-layer lookup."""
import torch
from torchvision import models


class LayerNotFound(ValueError):
    """Requested layer name does not exist in the chosen model."""


# conv layer name -> index of the conv module in model.features; the ReLU
# that follows it is at index + 1, activations are taken after it
_VGG16_CONVS = {
    "conv1_1": 0, "conv1_2": 2,
    "conv2_1": 5, "conv2_2": 7,
    "conv3_1": 10, "conv3_2": 12, "conv3_3": 14,
    "conv4_1": 17, "conv4_2": 19, "conv4_3": 21,
    "conv5_1": 24, "conv5_2": 26, "conv5_3": 28,
}

_ALEXNET_CONVS = {
    "conv1": 0, "conv2": 3, "conv3": 6, "conv4": 8, "conv5": 10,
}

_MODELS = {
    "vgg16": (models.vgg16, _VGG16_CONVS),
    "alexnet": (models.alexnet, _ALEXNET_CONVS),
}


def build_backbone(model_name, layer_name, weights_path=None, random_init=False,
                   seed=0):
    """Feature sub-network ending at the ReLU after the named conv layer.

    Weights come from `weights_path` (a torchvision state dict) when given;
    with random_init=True the architecture is seeded-randomly initialized
    instead (deterministic per seed). Otherwise torchvision's pretrained
    weights are downloaded, which needs network access.
    """
    if model_name not in _MODELS:
        raise LayerNotFound(f"unknown model {model_name!r}; choose from {sorted(_MODELS)}")
    factory, convs = _MODELS[model_name]
    if layer_name not in convs:
        raise LayerNotFound(
            f"layer {layer_name!r} not in {model_name}; choose from {sorted(convs)}")
    if random_init:
        torch.manual_seed(seed)
        net = factory(weights=None)
    elif weights_path:
        net = factory(weights=None)
        state = torch.load(weights_path, map_location="cpu", weights_only=True)
        net.load_state_dict(state)
    else:
        net = factory(weights="IMAGENET1K_V1")
    end = convs[layer_name] + 1  # include the ReLU
    backbone = torch.nn.Sequential(*list(net.features.children())[: end + 1])
    backbone.eval()
    stride = 1
    for module in backbone:
        if isinstance(module, torch.nn.MaxPool2d):
            stride *= module.stride if isinstance(module.stride, int) else module.stride[0]
        elif isinstance(module, torch.nn.Conv2d):
            s = module.stride if isinstance(module.stride, int) else module.stride[0]
            stride *= s
    return backbone, stride
