"""Shared test fixtures: an independent EDF writer and synthetic datasets.

The EDF builder here serializes headers and records directly from the
format's byte layout (field widths hardcoded), deliberately sharing no code
with the parser under test.
"""

from __future__ import annotations

import numpy as np
import pytest

from eegnext.ingest.epochs import Trial


def _pad(text: str, width: int) -> bytes:
    raw = text.encode("ascii")
    assert len(raw) <= width, f"{text!r} wider than {width}"
    return raw + b" " * (width - len(raw))


def build_edf_bytes(
    labels: list[str],
    digital: list[np.ndarray],
    samples_per_record: list[int],
    n_records: int,
    record_duration_s: float = 1.0,
    phys_min: float = -100.0,
    phys_max: float = 100.0,
    dig_min: int = -2048,
    dig_max: int = 2047,
    header_bytes_override: int | None = None,
) -> bytes:
    """Serialize an EDF file from digital int16 series (one per channel)."""
    ns = len(labels)
    header_bytes = header_bytes_override
    if header_bytes is None:
        header_bytes = 256 + 256 * ns

    duration = f"{record_duration_s:g}"
    head = b"".join([
        _pad("0", 8),
        _pad("test patient", 80),
        _pad("test recording", 80),
        _pad("01.01.20", 8),
        _pad("00.00.00", 8),
        _pad(str(header_bytes), 8),
        _pad("", 44),
        _pad(str(n_records), 8),
        _pad(duration, 8),
        _pad(str(ns), 4),
    ])
    assert len(head) == 256

    def field_block(values, width):
        return b"".join(_pad(str(v), width) for v in values)

    head += field_block(labels, 16)
    head += field_block([""] * ns, 80)                     # transducer
    head += field_block(["uV"] * ns, 8)                    # phys_dim
    head += field_block([f"{phys_min:g}"] * ns, 8)
    head += field_block([f"{phys_max:g}"] * ns, 8)
    head += field_block([str(dig_min)] * ns, 8)
    head += field_block([str(dig_max)] * ns, 8)
    head += field_block([""] * ns, 80)                     # prefiltering
    head += field_block([str(s) for s in samples_per_record], 8)
    head += field_block([""] * ns, 32)                     # reserved

    body = bytearray()
    for rec in range(n_records):
        for ch in range(ns):
            spr = samples_per_record[ch]
            chunk = np.asarray(
                digital[ch][rec * spr:(rec + 1) * spr], dtype="<i2"
            )
            assert chunk.size == spr
            body += chunk.tobytes()
    return bytes(head) + bytes(body)


def make_trial(
    subject: str,
    c: int = 2,
    t: int = 64,
    label: int = 0,
    index: int = 0,
    seed: int = 0,
    scale: float = 1.0,
) -> Trial:
    rng = np.random.default_rng(seed)
    return Trial(
        subject_id=subject,
        channels=[f"ch{i}" for i in range(c)],
        data=(scale * rng.standard_normal((c, t))).astype(np.float32),
        fs=100.0,
        label=label,
        trial_index=index,
    )


def synth_band_dataset(
    n_subjects: int = 10,
    trials_per_class: int = 8,
    c: int = 2,
    t: int = 600,
    fs: float = 100.0,
    bands: tuple[float, float] = (6.0, 20.0),
    seed: int = 11,
) -> list[Trial]:
    """Two-class dataset where the class is the dominant oscillation band.

    Each subject gets its own random channel mixing and gain, so alignment
    has real covariate shift to remove.
    """
    rng = np.random.default_rng(seed)
    trials = []
    times = np.arange(t) / fs
    for s in range(n_subjects):
        mix = np.eye(c) + 0.5 * rng.standard_normal((c, c))
        gain = 1.0 + 2.0 * rng.random()
        idx = 0
        for label, f0 in enumerate(bands):
            for _ in range(trials_per_class):
                f = f0 * (1 + 0.05 * rng.standard_normal())
                phase = rng.uniform(0, 2 * np.pi, size=(c, 1))
                osc = np.cos(2 * np.pi * f * times[None, :] + phase)
                noise = rng.standard_normal((c, t))
                data = gain * (mix @ (2.0 * osc + noise))
                trials.append(Trial(
                    subject_id=f"subj{s:02d}",
                    channels=[f"ch{i}" for i in range(c)],
                    data=data.astype(np.float32),
                    fs=fs,
                    label=label,
                    trial_index=idx,
                ))
                idx += 1
    return trials


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
