"""EEGX trial container: a portable little-endian binary format.

Layout: magic "EEGX", version u32=1, n_trials u32, C u32, T u32, fs f32,
L u32; then per trial: subject_id (u16 length + UTF-8), trial_index u32,
label i32, C*T f32 row-major samples; footer: CRC32 of all preceding bytes.

Channel names are not part of the format; readers get synthetic ch0..chC-1
names unless the caller re-attaches real ones.
"""

from __future__ import annotations

from pathlib import Path

from ..binio import CrcReader, CrcWriter
from .epochs import Trial, default_channel_names

MAGIC = b"EEGX"
VERSION = 1


def write_trialset(trials: list[Trial], path: str | Path, n_classes: int | None = None) -> None:
    """Write trials (all sharing C, T, fs) to an EEGX container."""
    if trials:
        c, t = trials[0].data.shape
        fs = trials[0].fs
        for tr in trials:
            if tr.data.shape != (c, t):
                raise ValueError(
                    f"mixed trial shapes: {tr.data.shape} vs {(c, t)}"
                )
            if tr.fs != fs:
                raise ValueError(f"mixed sampling rates: {tr.fs} vs {fs}")
        n_labels = n_classes if n_classes is not None else max(tr.label for tr in trials) + 1
        bad = [tr.label for tr in trials if not 0 <= tr.label < n_labels]
        if bad:
            raise ValueError(f"labels {sorted(set(bad))} outside [0, {n_labels})")
    else:
        c = t = 0
        fs = 0.0
        n_labels = n_classes if n_classes is not None else 0

    with open(path, "wb") as fh:
        w = CrcWriter(fh)
        w.write(MAGIC)
        w.write_u32(VERSION)
        w.write_u32(len(trials))
        w.write_u32(c)
        w.write_u32(t)
        w.write_f32(fs)
        w.write_u32(n_labels)
        for tr in trials:
            w.write_str(tr.subject_id)
            w.write_u32(tr.trial_index)
            w.write_i32(tr.label)
            w.write_f32_array(tr.data)
        w.finish()


def read_trialset(path: str | Path) -> tuple[list[Trial], int]:
    """Read an EEGX container; returns (trials, n_classes)."""
    data = Path(path).read_bytes()
    r = CrcReader(data, str(path))
    r.expect_magic(MAGIC)
    r.expect_version(VERSION)
    n_trials = r.read_u32()
    c = r.read_u32()
    t = r.read_u32()
    fs = r.read_f32()
    n_labels = r.read_u32()

    trials = []
    names = default_channel_names(c)
    for _ in range(n_trials):
        subject_id = r.read_str()
        trial_index = r.read_u32()
        label = r.read_i32()
        samples = r.read_f32_array(c * t, (c, t))
        trials.append(Trial(
            subject_id=subject_id,
            channels=list(names),
            data=samples,
            fs=fs,
            label=label,
            trial_index=trial_index,
        ))
    r.verify_footer()
    return trials, n_labels
