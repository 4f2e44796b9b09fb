"""Frozen-backbone feature extraction and linear-head finetuning."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..nn.network import Network, _trunc_normal, forward
from ..wavelet.transform import Scalogram
from .adamw import AdamWState, TrainConfig, adamw_step
from .loss import class_weights, weighted_cross_entropy


def extract_features(
    net: Network,
    scalograms: list[Scalogram],
    batch_size: int = 128,
    threads: int = 1,
) -> np.ndarray:
    """Pooled 768-dim features for each scalogram, batched through forward.

    The network is read-only, so batches may run on worker threads; results
    are reassembled in input order and are bit-identical either way.
    """
    starts = range(0, len(scalograms), batch_size)

    def run(start: int) -> np.ndarray:
        batch = np.stack(
            [sg.data for sg in scalograms[start:start + batch_size]]
        ).astype(np.float32)
        _, taps = forward(net, batch, want_taps=True)
        return taps["features"]

    if threads <= 1 or len(scalograms) <= batch_size:
        chunks = [run(start) for start in starts]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(run, starts))
    return np.concatenate(chunks, axis=0)


def train_head(
    features: np.ndarray,
    labels,
    cfg: TrainConfig,
    n_classes: int | None = None,
) -> tuple[np.ndarray, np.ndarray, list[float]]:
    """Train a linear classifier on frozen features with AdamW + weighted CE.

    Runs epochs * ceil(N / batch_size) optimizer steps over seeded shuffled
    minibatches. Returns (weight (L, 768) float32, bias (L,) float32,
    per-epoch mean loss history).
    """
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    n, dim = features.shape
    l = n_classes if n_classes is not None else int(labels.max()) + 1
    weights = class_weights(labels, l)

    rng = np.random.default_rng(cfg.seed)
    params = {
        "head.w": _trunc_normal(rng, (l, dim), 0.02).astype(np.float64),
        "head.b": np.zeros(l, dtype=np.float64),
    }
    state = AdamWState()
    history: list[float] = []
    for _ in range(cfg.epochs):
        order = rng.permutation(n)
        epoch_losses = []
        for start in range(0, n, cfg.batch_size):
            idx = order[start:start + cfg.batch_size]
            x = features[idx]
            y = labels[idx]
            logits = x @ params["head.w"].T + params["head.b"]
            loss, dlogits = weighted_cross_entropy(logits, y, weights)
            grads = {
                "head.w": dlogits.T @ x,
                "head.b": dlogits.sum(axis=0),
            }
            adamw_step(params, grads, state, cfg)
            epoch_losses.append(loss)
        history.append(float(np.mean(epoch_losses)))
    return (
        params["head.w"].astype(np.float32),
        params["head.b"].astype(np.float32),
        history,
    )


def head_scores(features: np.ndarray, weight: np.ndarray, bias: np.ndarray) -> np.ndarray:
    """Softmax class probabilities of the linear head."""
    logits = np.asarray(features, dtype=np.float64) @ np.asarray(weight, dtype=np.float64).T \
        + np.asarray(bias, dtype=np.float64)
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)
