"""The scalogram classifier network: layer graph, forward pass, accounting.

The backbone is the ConvNeXt-tiny layout (patchify stem, four stages of
3/3/9/3 residual blocks at widths 96/192/384/768, pooled LayerNorm head)
preceded by an EEG-specific adapter: a shape-preserving Conv2D from the C
input channels to 3 planes, GELU, and a nearest resize to 64x64 so the
patchify stage always sees a 64x64 image.

Parameters live in a flat name -> float32 array mapping; layers reference
them by name. Canonical names:

    stem.conv.{w,b}               adapter conv (3, C, 7, 7)
    patchify.{w,b}                (96, 3, 4, 4) stride-4 conv
    stageK.blockJ.{dw,ln,fc1,fc2}.{w,b,g}   residual blocks, K in 1..4
    downK.{w,b}                   stride-2 downsampler into stage K+1
    lnK.{g,b}                     ln0 after patchify, ln1..ln3 before the
                                  downsamplers, ln4 before the head
    head.{w,b}                    final linear (L, 768)
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr, ndtri

from ..errors import MissingTensor, NonFiniteActivation, ShapeMismatch
from . import kernels
from .archive import read_archive, write_archive

STAGE_WIDTHS = (96, 192, 384, 768)
STAGE_DEPTHS = (3, 3, 9, 3)
LN_EPS = 1e-6
INIT_STD = 0.02


@dataclass(frozen=True)
class LayerDef:
    name: str
    kind: str
    hyper: dict = field(default_factory=dict)
    param_names: tuple[str, ...] = ()


@dataclass
class Network:
    layers: list[LayerDef]
    params: dict[str, np.ndarray]
    meta: dict

    def param_count(self) -> int:
        return sum(int(np.prod(p.shape)) for p in self.params.values())


def _trunc_normal(rng: np.random.Generator, shape: tuple[int, ...], std: float) -> np.ndarray:
    # Inverse-CDF sampling of a normal truncated at +-2 std.
    lo, hi = ndtr(-2.0), ndtr(2.0)
    u = rng.uniform(lo, hi, size=shape)
    return (ndtri(u) * std).astype(np.float32)


def block_param_names(stage: int, block: int) -> dict[str, str]:
    prefix = f"stage{stage}.block{block}"
    return {
        "dw.w": f"{prefix}.dw.w", "dw.b": f"{prefix}.dw.b",
        "ln.g": f"{prefix}.ln.g", "ln.b": f"{prefix}.ln.b",
        "fc1.w": f"{prefix}.fc1.w", "fc1.b": f"{prefix}.fc1.b",
        "fc2.w": f"{prefix}.fc2.w", "fc2.b": f"{prefix}.fc2.b",
    }


def build_network(
    c: int, s: int, t: int, l: int, seed: int = 0, include_stem: bool = True
) -> Network:
    """Construct the network with seeded truncated-normal initialization.

    include_stem=False drops the C->3 adapter and its GELU (for feeding
    already-3-plane images); the nearest resize stays, so any (3, H, W)
    input is accepted.
    """
    if min(c, s, t, l) < 1:
        raise ValueError(f"C, S, T, L must all be >= 1, got {(c, s, t, l)}")
    rng = np.random.default_rng(seed)
    params: dict[str, np.ndarray] = {}
    layers: list[LayerDef] = []

    def add_conv(name: str, c_out: int, c_in: int, k: int, stride: int, pad: int):
        params[f"{name}.w"] = _trunc_normal(rng, (c_out, c_in, k, k), INIT_STD)
        params[f"{name}.b"] = np.zeros(c_out, dtype=np.float32)
        layers.append(LayerDef(
            name, "conv2d",
            {"stride": (stride, stride), "padding": (pad, pad)},
            (f"{name}.w", f"{name}.b"),
        ))

    def add_ln(name: str, width: int):
        params[f"{name}.g"] = np.ones(width, dtype=np.float32)
        params[f"{name}.b"] = np.zeros(width, dtype=np.float32)
        layers.append(LayerDef(
            name, "layernorm", {"eps": LN_EPS}, (f"{name}.g", f"{name}.b")
        ))

    if include_stem:
        add_conv("stem.conv", 3, c, 7, stride=1, pad=3)
        layers.append(LayerDef("stem.gelu", "gelu"))
    layers.append(LayerDef("resize", "nearest_resize", {"out_hw": (64, 64)}))
    add_conv("patchify", 96, 3, 4, stride=4, pad=0)
    add_ln("ln0", 96)

    for stage, (width, depth) in enumerate(zip(STAGE_WIDTHS, STAGE_DEPTHS), start=1):
        if stage > 1:
            add_ln(f"ln{stage - 1}", STAGE_WIDTHS[stage - 2])
            add_conv(f"down{stage - 1}", width, STAGE_WIDTHS[stage - 2], 2, stride=2, pad=0)
        for block in range(depth):
            names = block_param_names(stage, block)
            params[names["dw.w"]] = _trunc_normal(rng, (width, 1, 7, 7), INIT_STD)
            params[names["dw.b"]] = np.zeros(width, dtype=np.float32)
            params[names["ln.g"]] = np.ones(width, dtype=np.float32)
            params[names["ln.b"]] = np.zeros(width, dtype=np.float32)
            params[names["fc1.w"]] = _trunc_normal(rng, (4 * width, width), INIT_STD)
            params[names["fc1.b"]] = np.zeros(4 * width, dtype=np.float32)
            params[names["fc2.w"]] = _trunc_normal(rng, (width, 4 * width), INIT_STD)
            params[names["fc2.b"]] = np.zeros(width, dtype=np.float32)
            layers.append(LayerDef(
                f"stage{stage}.block{block}", "cnblock", {"eps": LN_EPS},
                tuple(names.values()),
            ))

    layers.append(LayerDef("pool", "avgpool"))
    add_ln("ln4", 768)
    layers.append(LayerDef("features", "flatten"))
    params["head.w"] = _trunc_normal(rng, (l, 768), INIT_STD)
    params["head.b"] = np.zeros(l, dtype=np.float32)
    layers.append(LayerDef("logits", "linear", {}, ("head.w", "head.b")))

    meta = {"C": c, "S": s, "T": t, "L": l, "seed": seed, "include_stem": include_stem}
    return Network(layers=layers, params=params, meta=meta)


def _apply_layer(layer: LayerDef, x: np.ndarray, params: dict[str, np.ndarray]) -> np.ndarray:
    kind = layer.kind
    if kind == "conv2d":
        w, b = (params[n] for n in layer.param_names)
        return kernels.conv2d(x, w, b, layer.hyper["stride"], layer.hyper["padding"])
    if kind == "gelu":
        return kernels.gelu(x)
    if kind == "nearest_resize":
        return kernels.nearest_resize(x, layer.hyper["out_hw"])
    if kind == "layernorm":
        g, b = (params[n] for n in layer.param_names)
        if x.ndim == 4:
            return kernels.layernorm_channels(x, g, b, layer.hyper["eps"])
        return kernels._layernorm_lastdim(x, g, b, layer.hyper["eps"])
    if kind == "cnblock":
        block_params = {
            key: params[name]
            for key, name in zip(
                ("dw.w", "dw.b", "ln.g", "ln.b", "fc1.w", "fc1.b", "fc2.w", "fc2.b"),
                layer.param_names,
            )
        }
        return kernels.cnblock(x, block_params, layer.hyper["eps"])
    if kind == "avgpool":
        return kernels.adaptive_avg_pool(x)
    if kind == "flatten":
        return x.reshape(x.shape[0], -1)
    if kind == "linear":
        w, b = (params[n] for n in layer.param_names)
        return kernels.linear(x, w, b)
    raise ShapeMismatch(f"unknown layer kind {kind!r}")


def forward(
    net: Network, x: np.ndarray, want_taps: bool = False
) -> np.ndarray | tuple[np.ndarray, dict[str, np.ndarray]]:
    """Run the network; returns logits (N, L), plus all taps if requested.

    Deterministic: identical inputs give bitwise-identical outputs, and a
    sample's row does not depend on the rest of the batch.
    """
    x = np.asarray(x, dtype=np.float32)
    expected_c = net.meta["C"] if net.meta["include_stem"] else 3
    if x.ndim != 4 or x.shape[1] != expected_c:
        raise ShapeMismatch(
            f"input {x.shape} incompatible with network expecting "
            f"(N, {expected_c}, H, W)"
        )
    if net.meta["include_stem"] and (x.shape[2], x.shape[3]) != (net.meta["S"], net.meta["T"]):
        raise ShapeMismatch(
            f"input plane {x.shape[2:]} != ({net.meta['S']}, {net.meta['T']})"
        )

    taps: dict[str, np.ndarray] = {}
    for layer in net.layers:
        x = _apply_layer(layer, x, net.params)
        if not np.all(np.isfinite(x)):
            raise NonFiniteActivation(f"non-finite activation after {layer.name!r}")
        if want_taps:
            taps[layer.name] = x
    return (x, taps) if want_taps else x


# --- parameter accounting ----------------------------------------------------

def _report_rows(net: Network) -> list[tuple[str, list[str]]]:
    rows: list[tuple[str, list[str]]] = []
    if net.meta["include_stem"]:
        rows.append(("stem.conv", ["stem.conv.w", "stem.conv.b"]))
    rows.append(("patchify", ["patchify.w", "patchify.b"]))
    rows.append(("ln0", ["ln0.g", "ln0.b"]))
    for stage, depth in enumerate(STAGE_DEPTHS, start=1):
        if stage > 1:
            rows.append((f"ln{stage - 1}", [f"ln{stage - 1}.g", f"ln{stage - 1}.b"]))
            rows.append((f"down{stage - 1}", [f"down{stage - 1}.w", f"down{stage - 1}.b"]))
        names = []
        for block in range(depth):
            names.extend(block_param_names(stage, block).values())
        rows.append((f"stage{stage}", names))
    rows.append(("ln4", ["ln4.g", "ln4.b"]))
    rows.append(("head", ["head.w", "head.b"]))
    return rows


def param_report(net: Network) -> list[dict]:
    """Per-row parameter accounting grouped like the architecture table."""
    report = []
    for label, names in _report_rows(net):
        shapes = [tuple(net.params[n].shape) for n in names]
        count = sum(int(np.prod(sh)) for sh in shapes)
        report.append({
            "row": label,
            "tensors": names,
            "shapes": shapes,
            "count": count,
        })
    report.append({
        "row": "total",
        "tensors": [],
        "shapes": [],
        "count": sum(r["count"] for r in report),
    })
    return report


def block_param_count(width: int) -> int:
    """Parameter count of a single residual block at the given width."""
    dw = width * 49 + width
    ln = 2 * width
    fc1 = width * 4 * width + 4 * width
    fc2 = 4 * width * width + width
    return dw + ln + fc1 + fc2


# --- persistence --------------------------------------------------------------

def save_weights(net: Network, path) -> None:
    write_archive(net.params, path)


def load_weights(net: Network, archive: dict[str, np.ndarray], strict: bool = True) -> Network:
    """Load tensors by canonical name; shapes validated before any write.

    strict=True requires the archive to cover every network parameter.
    strict=False loads the intersection (backbone-only archives leave the
    stem adapter and head at their initialized values).
    """
    if strict:
        missing = [n for n in net.params if n not in archive]
        if missing:
            raise MissingTensor(f"archive missing tensors: {missing}")
    staged = {}
    for name in net.params:
        if name not in archive:
            continue
        incoming = np.asarray(archive[name], dtype=np.float32)
        if incoming.shape != net.params[name].shape:
            raise ShapeMismatch(
                f"{name}: archive shape {incoming.shape} != "
                f"network shape {net.params[name].shape}"
            )
        staged[name] = incoming
    net.params.update(staged)
    return net


def load_weights_file(net: Network, path, strict: bool = True) -> Network:
    return load_weights(net, read_archive(path), strict=strict)
