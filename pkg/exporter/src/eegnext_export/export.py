"""Checkpoint conversion: ConvNeXt-tiny state dict -> EEGW archive.

Layer-scale handling: torchvision blocks scale the residual branch by a
per-channel vector gamma after the second pointwise projection. Scaling a
linear layer's outputs is exactly a row scaling of its weight and bias, so
gamma folds losslessly into fc2:

    fc2.w' = gamma[:, None] * fc2.w      fc2.b' = gamma * fc2.b

Every block either folds exactly (gamma present) or passes through (gamma
absent); there is no approximate path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch

from .mapping import (
    build_mapping,
    canonical_order,
    check_canonical_coverage,
    check_source_coverage,
    layer_scale_names,
    skip_list,
)
from .writer import read_eegw, write_eegw


@dataclass
class ExportReport:
    archive_path: str
    tensor_count: int
    skipped: list[str] = field(default_factory=list)
    folded_blocks: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "archive_path": self.archive_path,
            "tensor_count": self.tensor_count,
            "skipped": self.skipped,
            "folded_blocks": self.folded_blocks,
        }


def load_state_dict(checkpoint: str | Path) -> dict[str, torch.Tensor]:
    state = torch.load(checkpoint, map_location="cpu", weights_only=True)
    if isinstance(state, dict) and "state_dict" in state:
        state = state["state_dict"]
    return state


def build_model(state_dict: dict[str, torch.Tensor] | None = None):
    """ConvNeXt-tiny with an optional state dict loaded (eval mode)."""
    from torchvision.models import convnext_tiny

    model = convnext_tiny(weights=None)
    if state_dict is not None:
        model.load_state_dict(state_dict)
    model.eval()
    return model


def convert_tensors(
    state_dict: dict[str, torch.Tensor],
) -> tuple[dict[str, np.ndarray], list[str]]:
    """Map, fold, and order the tensors; returns (tensors, folded blocks)."""
    source_names = set(state_dict.keys())
    check_source_coverage(source_names)

    mapping = build_mapping()
    converted: dict[str, np.ndarray] = {}
    for src, dst in mapping.items():
        if src not in state_dict:
            continue
        converted[dst] = state_dict[src].detach().cpu().numpy().astype(np.float32)

    folded = []
    for ls_name in layer_scale_names():
        if ls_name not in state_dict:
            continue
        gamma = state_dict[ls_name].detach().cpu().numpy().astype(np.float32).reshape(-1)
        block = mapping[ls_name.replace("layer_scale", "block.5.weight")]
        prefix = block.rsplit(".", 1)[0]  # stageK.blockJ.fc2
        converted[f"{prefix}.w"] = gamma[:, None] * converted[f"{prefix}.w"]
        converted[f"{prefix}.b"] = gamma * converted[f"{prefix}.b"]
        folded.append(prefix.rsplit(".", 1)[0])

    check_canonical_coverage(set(converted))
    ordered = {name: converted[name] for name in canonical_order()}
    return ordered, folded


def export_weights(
    state_dict: dict[str, torch.Tensor], out_path: str | Path
) -> ExportReport:
    """Convert and write the archive plus its JSON mapping sidecar.

    The written bytes are re-read and compared against the in-memory
    tensors before the report is returned.
    """
    tensors, folded = convert_tensors(state_dict)
    out_path = Path(out_path)
    write_eegw(tensors, out_path)

    # self-check: round trip must reproduce the tensors bit for bit
    back = read_eegw(out_path)
    for name, array in tensors.items():
        if back[name].tobytes() != array.astype(np.float32).tobytes():
            raise RuntimeError(f"self-check failed for tensor {name}")

    skipped = [n for n in skip_list() if n in state_dict]
    sidecar = {
        "mapping": build_mapping(),
        "skipped": skipped,
        "folded_blocks": folded,
    }
    Path(str(out_path) + ".mapping.json").write_text(
        json.dumps(sidecar, indent=2, sort_keys=True) + "\n"
    )
    return ExportReport(
        archive_path=str(out_path),
        tensor_count=len(tensors),
        skipped=skipped,
        folded_blocks=folded,
    )
