"""Classification metrics: accuracy, macro one-vs-rest ROC-AUC, confusion."""

from __future__ import annotations

import numpy as np

from ..errors import DegenerateClass


def accuracy(preds, labels) -> float:
    """Percent correct; callers resolve argmax ties to the lowest index."""
    preds = np.asarray(preds, dtype=np.int64)
    labels = np.asarray(labels, dtype=np.int64)
    if preds.size == 0:
        raise ValueError("empty prediction list")
    return 100.0 * float((preds == labels).sum()) / preds.size


def predict(scores: np.ndarray) -> np.ndarray:
    # np.argmax returns the first (lowest-index) maximum, as required.
    return np.argmax(scores, axis=1)


def confusion_matrix(preds, labels, n_classes: int) -> np.ndarray:
    preds = np.asarray(preds, dtype=np.int64)
    labels = np.asarray(labels, dtype=np.int64)
    mat = np.zeros((n_classes, n_classes), dtype=np.int64)
    for y, p in zip(labels, preds):
        mat[y, p] += 1
    return mat


def _midranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="mergesort")
    ranks = np.empty(values.size, dtype=np.float64)
    sorted_vals = values[order]
    i = 0
    while i < values.size:
        j = i
        while j + 1 < values.size and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        # ranks are 1-based; ties share the average rank
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def _auc_binary(scores: np.ndarray, positive: np.ndarray) -> float:
    """One-vs-rest AUC via the Mann-Whitney rank statistic (ties count 1/2)."""
    n_pos = int(positive.sum())
    n_neg = positive.size - n_pos
    ranks = _midranks(scores)
    rank_sum = float(ranks[positive].sum())
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def roc_auc_macro(scores: np.ndarray, labels) -> tuple[float, list[int]]:
    """Unweighted mean of per-class one-vs-rest AUCs.

    Classes absent from labels (or covering all samples) are skipped and
    returned alongside the mean; if nothing is computable the result is
    degenerate and raises.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    n_classes = scores.shape[1]
    aucs = []
    skipped = []
    for cls in range(n_classes):
        positive = labels == cls
        n_pos = int(positive.sum())
        if n_pos == 0 or n_pos == labels.size:
            skipped.append(cls)
            continue
        aucs.append(_auc_binary(scores[:, cls], positive))
    if not aucs:
        raise DegenerateClass(
            f"no class has both positive and negative samples (skipped {skipped})"
        )
    return float(np.mean(aucs)), skipped
