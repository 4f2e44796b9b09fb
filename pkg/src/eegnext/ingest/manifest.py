"""Dataset manifest: which EDF files belong to which subject, plus labels.

JSON shape:
    {"dataset_name": ..., "label_names": [...],
     "entries": [{"subject_id", "file_path", "label_file", "fs", "n_channels"}]}

Label sidecars are CSV files with header ``trial_index,label``, one integer
class index per epoch.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

from ..errors import LabelCountMismatch


@dataclass
class ManifestEntry:
    subject_id: str
    file_path: str
    label_file: str
    fs: float
    n_channels: int


@dataclass
class Manifest:
    dataset_name: str
    label_names: list[str]
    entries: list[ManifestEntry]

    @property
    def n_classes(self) -> int:
        return len(self.label_names)


def load_manifest(path: str | Path) -> Manifest:
    path = Path(path)
    raw = json.loads(path.read_text())
    entries = []
    for e in raw["entries"]:
        entry = ManifestEntry(
            subject_id=str(e["subject_id"]),
            file_path=str(e["file_path"]),
            label_file=str(e["label_file"]),
            fs=float(e["fs"]),
            n_channels=int(e["n_channels"]),
        )
        # Relative paths are resolved against the manifest's directory.
        for attr in ("file_path", "label_file"):
            p = Path(getattr(entry, attr))
            if not p.is_absolute():
                p = path.parent / p
            if not p.exists():
                raise FileNotFoundError(f"manifest references missing file: {p}")
            setattr(entry, attr, str(p))
        entries.append(entry)
    return Manifest(
        dataset_name=str(raw["dataset_name"]),
        label_names=[str(x) for x in raw["label_names"]],
        entries=entries,
    )


def save_manifest(manifest: Manifest, path: str | Path) -> None:
    doc = {
        "dataset_name": manifest.dataset_name,
        "label_names": manifest.label_names,
        "entries": [
            {
                "subject_id": e.subject_id,
                "file_path": e.file_path,
                "label_file": e.label_file,
                "fs": e.fs,
                "n_channels": e.n_channels,
            }
            for e in manifest.entries
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def load_labels(path: str | Path, n_classes: int | None = None) -> list[int]:
    """Read a ``trial_index,label`` CSV sidecar, ordered by trial_index."""
    rows: dict[int, int] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or set(reader.fieldnames) != {"trial_index", "label"}:
            raise ValueError(
                f"{path}: expected CSV header 'trial_index,label', got {reader.fieldnames}"
            )
        for row in reader:
            rows[int(row["trial_index"])] = int(row["label"])
    if sorted(rows) != list(range(len(rows))):
        raise LabelCountMismatch(f"{path}: trial_index values must be dense from 0")
    labels = [rows[i] for i in range(len(rows))]
    if n_classes is not None:
        bad = [l for l in labels if not 0 <= l < n_classes]
        if bad:
            raise ValueError(f"{path}: labels {sorted(set(bad))} outside [0, {n_classes})")
    return labels


def save_labels(labels: list[int], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["trial_index", "label"])
        for i, label in enumerate(labels):
            writer.writerow([i, label])
