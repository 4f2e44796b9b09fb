"""EEG trial ingestion: EDF parsing, epoching, EEGX containers, fetching."""

from .edf import EdfHeader, EdfSignalHeader, parse_edf_header, read_edf_signals
from .epochs import Trial, default_channel_names, epoch_series
from .fetch import fetch_file, sha256_of
from .manifest import (
    Manifest,
    ManifestEntry,
    load_labels,
    load_manifest,
    save_labels,
    save_manifest,
)
from .trialset import read_trialset, write_trialset

__all__ = [
    "EdfHeader",
    "EdfSignalHeader",
    "Manifest",
    "ManifestEntry",
    "Trial",
    "default_channel_names",
    "epoch_series",
    "fetch_file",
    "load_labels",
    "load_manifest",
    "parse_edf_header",
    "read_edf_signals",
    "read_trialset",
    "save_labels",
    "save_manifest",
    "sha256_of",
    "write_trialset",
]
