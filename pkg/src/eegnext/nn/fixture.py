"""EEGF reference fixture: a seeded input plus reference activations.

Layout (little-endian): magic "EEGF", version u32=1, seed u64, tensor
count u32, then named tensors exactly as in the EEGW archive (name, ndim
u8, dims u32, f32 payload); footer: CRC32 of all preceding bytes.

Fixtures are produced by an external exporter from a reference forward
pass; replaying one through this package's forward pass cross-validates
the two implementations (tensor "input" in, tensor "features" compared).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..binio import CrcReader, CrcWriter

MAGIC = b"EEGF"
VERSION = 1


@dataclass
class Fixture:
    seed: int
    tensors: dict[str, np.ndarray]


def write_fixture(fixture: Fixture, path: str | Path) -> None:
    with open(path, "wb") as fh:
        w = CrcWriter(fh)
        w.write(MAGIC)
        w.write_u32(VERSION)
        w.write(struct.pack("<Q", fixture.seed))
        w.write_u32(len(fixture.tensors))
        for name, arr in fixture.tensors.items():
            arr = np.asarray(arr, dtype=np.float32)
            w.write_str(name)
            w.write(struct.pack("<B", arr.ndim))
            for d in arr.shape:
                w.write_u32(d)
            w.write_f32_array(arr)
        w.finish()


def read_fixture(path: str | Path) -> Fixture:
    data = Path(path).read_bytes()
    r = CrcReader(data, str(path))
    r.expect_magic(MAGIC)
    r.expect_version(VERSION)
    seed = struct.unpack("<Q", r.read(8))[0]
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
    return Fixture(seed=seed, tensors=tensors)
