"""EEGS scalogram container.

Layout (little-endian): magic "EEGS", version u32=1, n u32, C u32, S u32,
T u32, fs f32, then the S scale values as f32; per item: subject_id (u16
length + UTF-8), label i32, C*S*T f32; footer: CRC32 of all preceding
bytes.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ..binio import CrcReader, CrcWriter
from .scales import scale_set_from_values
from .transform import Scalogram

MAGIC = b"EEGS"
VERSION = 1


def write_scalogram_set(items: list[Scalogram], path: str | Path) -> None:
    if items:
        c, s, t = items[0].data.shape
        fs = items[0].fs
        scale_values = list(items[0].scales.scales)
        for it in items:
            if it.data.shape != (c, s, t):
                raise ValueError(f"mixed scalogram shapes: {it.data.shape} vs {(c, s, t)}")
            if it.fs != fs:
                raise ValueError(f"mixed sampling rates: {it.fs} vs {fs}")
    else:
        c = s = t = 0
        fs = 0.0
        scale_values = []

    with open(path, "wb") as fh:
        w = CrcWriter(fh)
        w.write(MAGIC)
        w.write_u32(VERSION)
        w.write_u32(len(items))
        w.write_u32(c)
        w.write_u32(s)
        w.write_u32(t)
        w.write_f32(fs)
        w.write_f32_array(np.asarray(scale_values, dtype=np.float32))
        for it in items:
            w.write_str(it.subject_id)
            w.write_i32(it.label)
            w.write_f32_array(it.data)
        w.finish()


def read_scalogram_set(path: str | Path) -> list[Scalogram]:
    data = Path(path).read_bytes()
    r = CrcReader(data, str(path))
    r.expect_magic(MAGIC)
    r.expect_version(VERSION)
    n = r.read_u32()
    c = r.read_u32()
    s = r.read_u32()
    t = r.read_u32()
    fs = r.read_f32()
    scale_values = r.read_f32_array(s, (s,)) if s else np.zeros(0, dtype=np.float32)
    scales = scale_set_from_values(scale_values) if s else None

    items = []
    for _ in range(n):
        subject_id = r.read_str()
        label = r.read_i32()
        tensor = r.read_f32_array(c * s * t, (c, s, t))
        items.append(Scalogram(
            data=tensor, scales=scales, fs=fs, label=label, subject_id=subject_id,
        ))
    r.verify_footer()
    return items
