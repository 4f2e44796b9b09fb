"""Cross-subject evaluation: align, transform, extract, finetune, score."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..align import align_all
from ..ingest.epochs import Trial
from ..nn.network import Network, build_network, load_weights_file
from ..wavelet.families import WaveletSpec
from ..wavelet.scales import ScaleSet
from ..wavelet.transform import Scalogram, scalogram_batch
from .adamw import TrainConfig
from .folds import kfold_subject_split
from .head import extract_features, head_scores, train_head
from .metrics import accuracy, confusion_matrix, predict, roc_auc_macro


@dataclass
class FoldResult:
    fold: int
    test_subjects: list[str]
    accuracy: float
    roc_auc: float
    skipped_classes: list[int]
    confusion: np.ndarray


@dataclass
class EvalReport:
    folds: list[FoldResult]
    mean_accuracy: float
    std_accuracy: float
    mean_auc: float
    std_auc: float
    config: dict

    def to_dict(self) -> dict:
        return {
            "folds": [
                {
                    "fold": f.fold,
                    "test_subjects": sorted(f.test_subjects),
                    "accuracy": f.accuracy,
                    "roc_auc": f.roc_auc,
                    "skipped_classes": f.skipped_classes,
                    "confusion": f.confusion.tolist(),
                }
                for f in self.folds
            ],
            "mean_accuracy": self.mean_accuracy,
            "std_accuracy": self.std_accuracy,
            "mean_auc": self.mean_auc,
            "std_auc": self.std_auc,
            "config": self.config,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def evaluate_features(
    features: np.ndarray,
    labels: np.ndarray,
    subjects: list[str],
    cfg: TrainConfig,
    n_classes: int,
    k: int = 5,
    extra_config: dict | None = None,
) -> EvalReport:
    """k-fold cross-subject evaluation of a linear head on fixed features."""
    labels = np.asarray(labels, dtype=np.int64)
    plan = kfold_subject_split(subjects, k=k, seed=cfg.seed)
    subjects_arr = np.asarray(subjects)

    results = []
    for fold_idx, test_subjects in enumerate(plan.folds):
        test_mask = np.isin(subjects_arr, sorted(test_subjects))
        train_mask = ~test_mask
        w, b, _ = train_head(
            features[train_mask], labels[train_mask], cfg, n_classes=n_classes
        )
        scores = head_scores(features[test_mask], w, b)
        preds = predict(scores)
        auc, skipped = roc_auc_macro(scores, labels[test_mask])
        results.append(FoldResult(
            fold=fold_idx,
            test_subjects=sorted(test_subjects),
            accuracy=accuracy(preds, labels[test_mask]),
            roc_auc=auc,
            skipped_classes=skipped,
            confusion=confusion_matrix(preds, labels[test_mask], n_classes),
        ))

    accs = np.array([r.accuracy for r in results])
    aucs = np.array([r.roc_auc for r in results])
    config = {
        "k": k,
        "seed": cfg.seed,
        "lr": cfg.lr,
        "weight_decay": cfg.weight_decay,
        "epochs": cfg.epochs,
        "batch_size": cfg.batch_size,
        "auc_averaging": "macro one-vs-rest",
    }
    config.update(extra_config or {})
    return EvalReport(
        folds=results,
        mean_accuracy=float(accs.mean()),
        std_accuracy=float(accs.std(ddof=1)) if len(accs) > 1 else 0.0,
        mean_auc=float(aucs.mean()),
        std_auc=float(aucs.std(ddof=1)) if len(aucs) > 1 else 0.0,
        config=config,
    )


def evaluate_trials(
    trials: list[Trial],
    cfg: TrainConfig,
    wavelet_spec: WaveletSpec,
    scales: ScaleSet,
    n_classes: int,
    shrinkage: float = 0.0,
    center: bool = False,
    weights_path=None,
    k: int = 5,
    power: bool = False,
    threads: int = 1,
    net: Network | None = None,
) -> EvalReport:
    """Full evaluation chain from trials.

    Per-subject alignment, scalogram computation, and frozen-backbone
    feature extraction happen once (they are fold-independent: every
    subject is whitened by its own statistics); the head is retrained per
    fold on train-fold subjects only.
    """
    aligned, _ = align_all(trials, shrinkage=shrinkage, center=center)
    scalograms = scalogram_batch(aligned, scales, wavelet_spec, power=power, threads=threads)

    c, s, t = scalograms[0].data.shape
    if net is None:
        net = build_network(c, s, t, n_classes, seed=cfg.seed)
        if weights_path is not None:
            load_weights_file(net, weights_path, strict=False)

    features = extract_features(net, scalograms, batch_size=cfg.batch_size, threads=threads)
    labels = np.array([sg.label for sg in scalograms], dtype=np.int64)
    subjects = [sg.subject_id for sg in scalograms]
    extra = {
        "wavelet": wavelet_spec.family,
        "B": wavelet_spec.B,
        "C_freq": wavelet_spec.C,
        "m": wavelet_spec.m,
        "scale_mode": scales.mode,
        "max_scale": scales.max_a,
        "shrinkage": shrinkage,
        "center": center,
        "train_scope": "head",
    }
    return evaluate_features(
        features, labels, subjects, cfg, n_classes, k=k, extra_config=extra
    )


def evaluate_scalograms(
    scalograms: list[Scalogram],
    cfg: TrainConfig,
    n_classes: int,
    weights_path=None,
    k: int = 5,
    net: Network | None = None,
    extra_config: dict | None = None,
) -> EvalReport:
    """Evaluation chain starting from precomputed scalograms."""
    c, s, t = scalograms[0].data.shape
    if net is None:
        net = build_network(c, s, t, n_classes, seed=cfg.seed)
        if weights_path is not None:
            load_weights_file(net, weights_path, strict=False)
    features = extract_features(net, scalograms, batch_size=cfg.batch_size)
    labels = np.array([sg.label for sg in scalograms], dtype=np.int64)
    subjects = [sg.subject_id for sg in scalograms]
    return evaluate_features(
        features, labels, subjects, cfg, n_classes, k=k, extra_config=extra_config
    )
