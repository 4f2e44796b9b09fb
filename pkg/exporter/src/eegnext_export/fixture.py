"""Reference-fixture emission: seeded input + reference activations.

The fixture stores the input tensor itself (consumers never re-derive it
from the seed), per-stage mean-|activation| checksums named after the
consumer's tap names, and the pooled feature/logit tensors from a standard
eval-mode forward pass. Layer scale is active in this reference pass; the
exported archive folds it exactly, so the two stay consistent.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import torch

from .writer import write_eegf

# torchvision features index -> consumer tap name of the same activation
_STAGE_TAPS = {
    1: "stage1.block2",
    3: "stage2.block2",
    5: "stage3.block8",
    7: "stage4.block2",
}

INPUT_SHAPE = (1, 3, 64, 64)


def make_input(seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.standard_normal(INPUT_SHAPE).astype(np.float32)


def reference_forward(model, x: np.ndarray) -> dict[str, np.ndarray]:
    """Eval-mode forward collecting stage outputs, pooled features, logits."""
    taps: dict[str, np.ndarray] = {}
    handles = []
    for fi, tap in _STAGE_TAPS.items():
        def hook(_module, _inp, out, _tap=tap):
            taps[_tap] = out.detach().numpy()
        handles.append(model.features[fi].register_forward_hook(hook))

    def pool_hook(_module, _inp, out):
        taps["pool"] = out.detach().numpy()

    handles.append(model.avgpool.register_forward_hook(pool_hook))

    def ln4_hook(_module, _inp, out):
        taps["features"] = out.detach().numpy().reshape(1, -1)

    handles.append(model.classifier[0].register_forward_hook(ln4_hook))
    try:
        with torch.no_grad():
            logits = model(torch.from_numpy(x))
    finally:
        for h in handles:
            h.remove()
    taps["logits"] = logits.numpy()
    return taps


def emit_fixture(model, seed: int, out_path: str | Path) -> dict[str, np.ndarray]:
    """Run the reference pass and write the EEGF file; returns its tensors."""
    x = make_input(seed)
    taps = reference_forward(model, x)
    tensors: dict[str, np.ndarray] = {"input": x}
    tensors["features"] = taps["features"].astype(np.float32)
    tensors["logits"] = taps["logits"].astype(np.float32)
    for tap in list(_STAGE_TAPS.values()) + ["pool"]:
        checksum = np.float32(np.mean(np.abs(taps[tap], dtype=np.float64)))
        tensors[f"checksum/{tap}"] = checksum.reshape(())
    for name, arr in tensors.items():
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"fixture tensor {name} is not finite")
    write_eegf(seed, tensors, out_path)
    return tensors
