"""Head finetuning, cross-subject k-fold evaluation, and metrics."""

from .adamw import AdamWState, TrainConfig, adamw_step
from .folds import FoldPlan, kfold_subject_split
from .head import extract_features, head_scores, train_head
from .loss import class_weights, weighted_cross_entropy
from .metrics import accuracy, confusion_matrix, predict, roc_auc_macro
from .pipeline import (
    EvalReport,
    FoldResult,
    evaluate_features,
    evaluate_scalograms,
    evaluate_trials,
)

__all__ = [
    "AdamWState",
    "EvalReport",
    "FoldPlan",
    "FoldResult",
    "TrainConfig",
    "accuracy",
    "adamw_step",
    "class_weights",
    "confusion_matrix",
    "evaluate_features",
    "evaluate_scalograms",
    "evaluate_trials",
    "extract_features",
    "head_scores",
    "kfold_subject_split",
    "predict",
    "roc_auc_macro",
    "train_head",
    "weighted_cross_entropy",
]
