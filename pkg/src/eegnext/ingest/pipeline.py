"""Manifest-driven ingestion: EDF files + label sidecars -> Trial lists."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ..errors import RateMismatch
from .edf import parse_edf_header, read_edf_signals
from .epochs import Trial, epoch_series
from .manifest import Manifest, load_labels


def ingest_entry(
    file_path: str | Path,
    subject_id: str,
    label_file: str | Path,
    window_s: float,
    channels: list[str] | None = None,
    n_classes: int | None = None,
) -> list[Trial]:
    """Parse one EDF file into labeled trials for one subject."""
    data = Path(file_path).read_bytes()
    header = parse_edf_header(data)
    names = channels if channels is not None else header.labels
    series_map = read_edf_signals(data, header, names)

    spr = header.signals[header.labels.index(names[0])].samples_per_record
    if header.record_duration_s <= 0:
        raise RateMismatch(f"{file_path}: record duration {header.record_duration_s}")
    fs = spr / header.record_duration_s

    series = np.vstack([series_map[name] for name in names])
    labels = load_labels(label_file, n_classes)
    return epoch_series(
        series, fs, window_s, labels, subject_id=subject_id, channels=names
    )


def ingest_manifest(
    manifest: Manifest,
    window_s: float,
    channels: list[str] | None = None,
) -> list[Trial]:
    """Ingest every manifest entry; trial_index restarts per subject file."""
    trials: list[Trial] = []
    for entry in manifest.entries:
        trials.extend(ingest_entry(
            entry.file_path,
            entry.subject_id,
            entry.label_file,
            window_s,
            channels=channels,
            n_classes=manifest.n_classes,
        ))
    return trials
