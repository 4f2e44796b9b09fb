"""Tensor kernels, the scalogram classifier network, and the EEGW archive."""

from .archive import read_archive, write_archive
from .kernels import (
    adaptive_avg_pool,
    cnblock,
    conv2d,
    depthwise_conv7,
    gelu,
    layernorm_channels,
    linear,
    nearest_resize,
)
from .network import (
    LayerDef,
    Network,
    block_param_count,
    build_network,
    forward,
    load_weights,
    load_weights_file,
    param_report,
    save_weights,
)

__all__ = [
    "LayerDef",
    "Network",
    "adaptive_avg_pool",
    "block_param_count",
    "build_network",
    "cnblock",
    "conv2d",
    "depthwise_conv7",
    "forward",
    "gelu",
    "layernorm_channels",
    "linear",
    "load_weights",
    "load_weights_file",
    "nearest_resize",
    "param_report",
    "read_archive",
    "save_weights",
    "write_archive",
]
