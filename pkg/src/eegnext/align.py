"""Euclidean-space alignment.

Each subject's trials are whitened by the inverse square root of that
subject's mean covariance, so that after the transform the subject-mean
covariance is the identity. Covariance is accumulated from raw X X^T (no
mean centering by default) and all matrix work happens in float64.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptyTrialList,
    MixedChannelCounts,
    MixedSubjects,
    NonSymmetric,
    SingularCovariance,
)
from .ingest.epochs import Trial

EIG_FLOOR_REL = 1e-10


@dataclass
class SubjectCovariance:
    subject_id: str
    sigma: np.ndarray  # (C, C) float64, symmetric PSD
    n_trials: int


@dataclass
class Whitener:
    subject_id: str
    w: np.ndarray  # (C, C) float64, symmetric PD: regularized sigma^(-1/2)
    shrinkage: float


def mean_covariance(trials: list[Trial], center: bool = False) -> SubjectCovariance:
    """Arithmetic mean of X X^T over one subject's trials, in float64."""
    if not trials:
        raise EmptyTrialList("need at least one trial")
    subject = trials[0].subject_id
    c = trials[0].n_channels
    acc = np.zeros((c, c), dtype=np.float64)
    for tr in trials:
        if tr.subject_id != subject:
            raise MixedSubjects(f"{tr.subject_id!r} mixed with {subject!r}")
        if tr.n_channels != c:
            raise MixedChannelCounts(f"{tr.n_channels} channels, expected {c}")
        x = tr.data.astype(np.float64)
        if center:
            x = x - x.mean(axis=1, keepdims=True)
        acc += x @ x.T
    sigma = acc / len(trials)
    sigma = (sigma + sigma.T) / 2.0
    return SubjectCovariance(subject_id=subject, sigma=sigma, n_trials=len(trials))


def inv_sqrt_spd(
    sigma: np.ndarray, shrinkage: float = 0.0, subject_id: str = ""
) -> Whitener:
    """Symmetric inverse square root of a shrinkage-regularized SPD matrix.

    With shrinkage s, the regularized matrix is
    (1 - s) * sigma + s * (tr(sigma)/C) * I; its eigendecomposition gives
    w = V diag(lambda^-1/2) V^T.
    """
    sigma = np.asarray(sigma, dtype=np.float64)
    if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1]:
        raise NonSymmetric(f"expected square matrix, got shape {sigma.shape}")
    scale = max(np.abs(sigma).max(), np.finfo(np.float64).tiny)
    if np.abs(sigma - sigma.T).max() > 1e-12 * scale:
        raise NonSymmetric("matrix is not symmetric to 1e-12 relative")
    if not 0.0 <= shrinkage < 1.0:
        raise ValueError(f"shrinkage must be in [0, 1), got {shrinkage}")

    c = sigma.shape[0]
    target = (np.trace(sigma) / c) * np.eye(c)
    reg = (1.0 - shrinkage) * sigma + shrinkage * target

    eigvals, eigvecs = np.linalg.eigh(reg)
    floor = EIG_FLOOR_REL * max(eigvals.max(), 0.0)
    if np.any(eigvals <= floor):
        if shrinkage == 0.0:
            raise SingularCovariance(
                f"eigenvalue {eigvals.min():.3e} at or below floor {floor:.3e}; "
                f"use shrinkage > 0"
            )
        eigvals = np.maximum(eigvals, floor)

    w = (eigvecs * (eigvals ** -0.5)) @ eigvecs.T
    w = (w + w.T) / 2.0
    return Whitener(subject_id=subject_id, w=w, shrinkage=shrinkage)


def whiten_trials(trials: list[Trial], whitener: Whitener) -> list[Trial]:
    out = []
    for tr in trials:
        aligned = (whitener.w @ tr.data.astype(np.float64)).astype(np.float32)
        out.append(Trial(
            subject_id=tr.subject_id,
            channels=list(tr.channels),
            data=aligned,
            fs=tr.fs,
            label=tr.label,
            trial_index=tr.trial_index,
        ))
    return out


def align_subject(
    trials: list[Trial], shrinkage: float = 0.0, center: bool = False
) -> tuple[list[Trial], Whitener]:
    """Whiten one subject's trials by their own mean-covariance statistics."""
    cov = mean_covariance(trials, center=center)
    whitener = inv_sqrt_spd(cov.sigma, shrinkage, subject_id=cov.subject_id)
    if center:
        trials = [
            Trial(
                subject_id=tr.subject_id,
                channels=list(tr.channels),
                data=(tr.data.astype(np.float64)
                      - tr.data.astype(np.float64).mean(axis=1, keepdims=True)
                      ).astype(np.float32),
                fs=tr.fs,
                label=tr.label,
                trial_index=tr.trial_index,
            )
            for tr in trials
        ]
    return whiten_trials(trials, whitener), whitener


def align_all(
    trials: list[Trial], shrinkage: float = 0.0, center: bool = False
) -> tuple[list[Trial], dict[str, Whitener]]:
    """Group trials by subject and align each group; order is preserved."""
    by_subject: dict[str, list[int]] = {}
    for i, tr in enumerate(trials):
        by_subject.setdefault(tr.subject_id, []).append(i)

    aligned: list[Trial | None] = [None] * len(trials)
    whiteners: dict[str, Whitener] = {}
    for subject, indices in by_subject.items():
        sub_aligned, whitener = align_subject(
            [trials[i] for i in indices], shrinkage, center
        )
        whiteners[subject] = whitener
        for i, tr in zip(indices, sub_aligned):
            aligned[i] = tr
    return [tr for tr in aligned if tr is not None], whiteners
