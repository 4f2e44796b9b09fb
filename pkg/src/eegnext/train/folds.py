"""Subject-wise k-fold planning: test subjects never appear in training."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import TooFewSubjects


@dataclass
class FoldPlan:
    k: int
    folds: list[set[str]]
    seed: int

    def train_subjects(self, fold: int) -> set[str]:
        out: set[str] = set()
        for i, members in enumerate(self.folds):
            if i != fold:
                out |= members
        return out


def kfold_subject_split(subject_ids, k: int = 5, seed: int = 0) -> FoldPlan:
    """Seeded shuffle then round-robin assignment into k disjoint folds."""
    unique = sorted(set(subject_ids))
    if len(unique) < k:
        raise TooFewSubjects(f"{len(unique)} subjects cannot fill {k} folds")
    rng = np.random.default_rng(seed)
    order = [unique[i] for i in rng.permutation(len(unique))]
    folds: list[set[str]] = [set() for _ in range(k)]
    for i, sid in enumerate(order):
        folds[i % k].add(sid)
    return FoldPlan(k=k, folds=folds, seed=seed)
