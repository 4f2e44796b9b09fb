"""EEGW named-tensor archive.

Layout (little-endian): magic "EEGW", version u32=1, tensor_count u32; per
tensor: name (u16 length + UTF-8), ndim u8, ndim x u32 dims, then the
element-count f32 payload; footer: CRC32 of all preceding bytes. Tensor
order is preserved, so identical inputs serialize byte-identically.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from ..binio import CrcReader, CrcWriter

MAGIC = b"EEGW"
VERSION = 1


def write_archive(tensors: dict[str, np.ndarray], path: str | Path) -> None:
    with open(path, "wb") as fh:
        w = CrcWriter(fh)
        w.write(MAGIC)
        w.write_u32(VERSION)
        w.write_u32(len(tensors))
        for name, arr in tensors.items():
            arr = np.asarray(arr, dtype=np.float32)
            w.write_str(name)
            w.write(struct.pack("<B", arr.ndim))
            for d in arr.shape:
                w.write_u32(d)
            w.write_f32_array(arr)
        w.finish()


def read_archive(path: str | Path) -> dict[str, np.ndarray]:
    data = Path(path).read_bytes()
    r = CrcReader(data, str(path))
    r.expect_magic(MAGIC)
    r.expect_version(VERSION)
    count = r.read_u32()
    tensors: dict[str, np.ndarray] = {}
    for _ in range(count):
        name = r.read_str()
        ndim = struct.unpack("<B", r.read(1))[0]
        dims = tuple(r.read_u32() for _ in range(ndim))
        total = 1
        for d in dims:
            total *= d
        tensors[name] = r.read_f32_array(total, dims)
    r.verify_footer()
    return tensors
