"""Tensor-name mapping from torchvision ConvNeXt-tiny to EEGW canonical names.

Canonical names (consumer side):
    patchify.{w,b}, ln0.{g,b},
    stageK.blockJ.{dw.w, dw.b, ln.g, ln.b, fc1.w, fc1.b, fc2.w, fc2.b},
    lnK.{g,b} for K in 1..3 (pre-downsample) and ln4 (pre-head),
    downK.{w,b} for K in 1..3.

The classifier head is skipped (the consumer trains its own), and
layer_scale tensors have no canonical target: each is folded exactly into
the block's second pointwise projection (see export.fold_layer_scale).
"""

from __future__ import annotations

STAGE_DEPTHS = (3, 3, 9, 3)

# torchvision features indices: 0 = patchify stem, odd = block stages,
# even >= 2 = downsample (LayerNorm + Conv2d) pairs
_STAGE_FEATURE_INDEX = {1: 1, 2: 3, 3: 5, 4: 7}
_DOWN_FEATURE_INDEX = {1: 2, 2: 4, 3: 6}

_BLOCK_SUBMAP = {
    "block.0.weight": "dw.w",
    "block.0.bias": "dw.b",
    "block.2.weight": "ln.g",
    "block.2.bias": "ln.b",
    "block.3.weight": "fc1.w",
    "block.3.bias": "fc1.b",
    "block.5.weight": "fc2.w",
    "block.5.bias": "fc2.b",
}


class UnmappedTensor(Exception):
    """A source tensor has no canonical target and is not on the skip list."""


def build_mapping() -> dict[str, str]:
    """Source state-dict name -> canonical EEGW name."""
    mapping = {
        "features.0.0.weight": "patchify.w",
        "features.0.0.bias": "patchify.b",
        "features.0.1.weight": "ln0.g",
        "features.0.1.bias": "ln0.b",
        "classifier.0.weight": "ln4.g",
        "classifier.0.bias": "ln4.b",
    }
    for stage, depth in enumerate(STAGE_DEPTHS, start=1):
        fi = _STAGE_FEATURE_INDEX[stage]
        for block in range(depth):
            for src_tail, dst_tail in _BLOCK_SUBMAP.items():
                mapping[f"features.{fi}.{block}.{src_tail}"] = \
                    f"stage{stage}.block{block}.{dst_tail}"
    for down, fi in _DOWN_FEATURE_INDEX.items():
        mapping[f"features.{fi}.0.weight"] = f"ln{down}.g"
        mapping[f"features.{fi}.0.bias"] = f"ln{down}.b"
        mapping[f"features.{fi}.1.weight"] = f"down{down}.w"
        mapping[f"features.{fi}.1.bias"] = f"down{down}.b"
    return mapping


def layer_scale_names() -> list[str]:
    names = []
    for stage, depth in enumerate(STAGE_DEPTHS, start=1):
        fi = _STAGE_FEATURE_INDEX[stage]
        for block in range(depth):
            names.append(f"features.{fi}.{block}.layer_scale")
    return names


def skip_list() -> list[str]:
    """Source tensors deliberately not exported.

    The classifier head is consumer-trained; layer_scale vectors are folded
    into fc2 rather than carried over.
    """
    return ["classifier.2.weight", "classifier.2.bias"] + layer_scale_names()


def canonical_order() -> list[str]:
    """Fixed serialization order: stem-to-head, so re-exports are byte-identical."""
    order = ["patchify.w", "patchify.b", "ln0.g", "ln0.b"]
    for stage, depth in enumerate(STAGE_DEPTHS, start=1):
        if stage > 1:
            k = stage - 1
            order += [f"ln{k}.g", f"ln{k}.b", f"down{k}.w", f"down{k}.b"]
        for block in range(depth):
            prefix = f"stage{stage}.block{block}"
            order += [
                f"{prefix}.dw.w", f"{prefix}.dw.b",
                f"{prefix}.ln.g", f"{prefix}.ln.b",
                f"{prefix}.fc1.w", f"{prefix}.fc1.b",
                f"{prefix}.fc2.w", f"{prefix}.fc2.b",
            ]
    order += ["ln4.g", "ln4.b"]
    return order


def check_source_coverage(source_names: set[str]) -> None:
    """Every source tensor must be mapped or on the skip list."""
    known = set(build_mapping()) | set(skip_list())
    stray = sorted(source_names - known)
    if stray:
        raise UnmappedTensor(
            f"{len(stray)} source tensors have no canonical target: {stray[:8]}"
        )


def check_canonical_coverage(exported_names: set[str]) -> None:
    """Every canonical backbone name must appear exactly once before writing."""
    expected = set(canonical_order())
    missing = sorted(expected - exported_names)
    extra = sorted(exported_names - expected)
    if missing or extra:
        raise UnmappedTensor(
            f"canonical coverage broken: missing {missing[:8]}, extra {extra[:8]}"
        )
