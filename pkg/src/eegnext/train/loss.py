"""Weighted cross-entropy loss with analytic gradient."""

from __future__ import annotations

import numpy as np

from ..errors import MissingClass, NonFiniteLogits


def class_weights(labels, n_classes: int | None = None) -> np.ndarray:
    """Inverse-frequency weights w_l = N / (L * count_l); mean-one when balanced."""
    labels = np.asarray(labels, dtype=np.int64)
    l = n_classes if n_classes is not None else int(labels.max()) + 1
    counts = np.bincount(labels, minlength=l)
    missing = np.nonzero(counts == 0)[0]
    if missing.size:
        raise MissingClass(f"classes {missing.tolist()} absent from labels")
    return labels.size / (l * counts.astype(np.float64))


def weighted_cross_entropy(
    logits: np.ndarray, labels, weights: np.ndarray
) -> tuple[float, np.ndarray]:
    """Weighted-mean cross entropy and its exact gradient w.r.t. the logits.

    loss = sum_i w_{y_i} * (-log softmax(logits_i)[y_i]) / sum_i w_{y_i},
    stabilized by per-row max subtraction. Returns (loss, dlogits) with
    dlogits in float64.
    """
    logits = np.asarray(logits, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    weights = np.asarray(weights, dtype=np.float64)
    if not np.all(np.isfinite(logits)):
        raise NonFiniteLogits("logits contain NaN or Inf")
    n = logits.shape[0]

    shifted = logits - logits.max(axis=1, keepdims=True)
    log_z = np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    log_probs = shifted - log_z

    sample_w = weights[labels]
    total_w = sample_w.sum()
    loss = float(-(sample_w * log_probs[np.arange(n), labels]).sum() / total_w)

    probs = np.exp(log_probs)
    dlogits = probs * sample_w[:, None]
    dlogits[np.arange(n), labels] -= sample_w
    dlogits /= total_w
    return loss, dlogits
