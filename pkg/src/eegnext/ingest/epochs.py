"""Trial epoching: cut a continuous multichannel series into labeled windows."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import LabelCountMismatch


@dataclass
class Trial:
    """One epoched multichannel EEG recording.

    data is a (C, T) float32 matrix in microvolts; label is a dense class
    index in [0, L).
    """

    subject_id: str
    channels: list[str]
    data: np.ndarray
    fs: float
    label: int
    trial_index: int

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float32)
        if self.data.ndim != 2:
            raise ValueError(f"trial data must be (C, T), got shape {self.data.shape}")
        if len(self.channels) != self.data.shape[0]:
            raise ValueError(
                f"{len(self.channels)} channel names for {self.data.shape[0]} rows"
            )
        if not np.all(np.isfinite(self.data)):
            raise ValueError("trial data contains non-finite values")
        if self.fs <= 0:
            raise ValueError(f"fs must be positive, got {self.fs}")
        if self.label < 0:
            raise ValueError(f"label must be >= 0, got {self.label}")

    @property
    def n_channels(self) -> int:
        return self.data.shape[0]

    @property
    def n_samples(self) -> int:
        return self.data.shape[1]


def default_channel_names(n: int) -> list[str]:
    return [f"ch{i}" for i in range(n)]


def epoch_series(
    series: np.ndarray,
    fs: float,
    window_s: float,
    labels: list[int],
    subject_id: str = "",
    channels: list[str] | None = None,
) -> list[Trial]:
    """Cut (C, N) samples into consecutive non-overlapping labeled windows.

    Window length T = window_s * fs must be a positive integer; the trailing
    partial window is dropped, and len(labels) must equal floor(N / T).
    """
    series = np.asarray(series, dtype=np.float64)
    if series.ndim != 2:
        raise ValueError(f"series must be (C, N), got shape {series.shape}")
    t_float = window_s * fs
    t = int(round(t_float))
    if t <= 0 or abs(t_float - t) > 1e-9 * max(1.0, abs(t_float)):
        raise ValueError(f"window_s * fs = {t_float} is not a positive integer")

    n_windows = series.shape[1] // t
    if len(labels) != n_windows:
        raise LabelCountMismatch(
            f"{len(labels)} labels for {n_windows} complete windows "
            f"(N={series.shape[1]}, T={t})"
        )

    names = channels if channels is not None else default_channel_names(series.shape[0])
    trials = []
    for i in range(n_windows):
        trials.append(Trial(
            subject_id=subject_id,
            channels=list(names),
            data=series[:, i * t:(i + 1) * t].astype(np.float32),
            fs=float(fs),
            label=int(labels[i]),
            trial_index=i,
        ))
    return trials
