"""Binary writers for the EEGW archive and EEGF fixture formats.

Independent implementations of the consumer's container layouts
(little-endian; 4-byte magic, u32 version, typed payload, CRC32 footer over
all preceding bytes). Kept free of any consumer-package import: the two
sides meet only at the byte level.
"""

from __future__ import annotations

import struct
import zlib
from pathlib import Path

import numpy as np

EEGW_MAGIC = b"EEGW"
EEGF_MAGIC = b"EEGF"
VERSION = 1


class _Writer:
    def __init__(self, fh):
        self._fh = fh
        self._crc = 0

    def write(self, data: bytes) -> None:
        self._fh.write(data)
        self._crc = zlib.crc32(data, self._crc)

    def finish(self) -> None:
        self._fh.write(struct.pack("<I", self._crc))


def _write_tensor(w: _Writer, name: str, array: np.ndarray) -> None:
    # asarray (not ascontiguousarray) so 0-d scalars keep ndim == 0
    array = np.asarray(array, dtype="<f4")
    raw_name = name.encode("utf-8")
    w.write(struct.pack("<H", len(raw_name)))
    w.write(raw_name)
    w.write(struct.pack("<B", array.ndim))
    for d in array.shape:
        w.write(struct.pack("<I", d))
    w.write(array.tobytes())


def write_eegw(tensors: dict[str, np.ndarray], path: str | Path) -> None:
    """Write named float32 tensors in the given order."""
    with open(path, "wb") as fh:
        w = _Writer(fh)
        w.write(EEGW_MAGIC)
        w.write(struct.pack("<I", VERSION))
        w.write(struct.pack("<I", len(tensors)))
        for name, array in tensors.items():
            _write_tensor(w, name, array)
        w.finish()


def read_eegw(path: str | Path) -> dict[str, np.ndarray]:
    """Self-check reader (round-trip verification before publishing)."""
    data = Path(path).read_bytes()
    if data[:4] != EEGW_MAGIC:
        raise ValueError(f"{path}: bad magic {data[:4]!r}")
    if zlib.crc32(data[:-4]) != struct.unpack("<I", data[-4:])[0]:
        raise ValueError(f"{path}: CRC mismatch")
    pos = 4
    version, count = struct.unpack_from("<II", data, pos)
    pos += 8
    if version != VERSION:
        raise ValueError(f"{path}: version {version}")
    out: dict[str, np.ndarray] = {}
    for _ in range(count):
        (name_len,) = struct.unpack_from("<H", data, pos)
        pos += 2
        name = data[pos:pos + name_len].decode("utf-8")
        pos += name_len
        (ndim,) = struct.unpack_from("<B", data, pos)
        pos += 1
        dims = struct.unpack_from(f"<{ndim}I", data, pos) if ndim else ()
        pos += 4 * ndim
        total = int(np.prod(dims)) if ndim else 1
        out[name] = np.frombuffer(
            data, dtype="<f4", count=total, offset=pos
        ).reshape(dims).copy()
        pos += 4 * total
    return out


def write_eegf(seed: int, tensors: dict[str, np.ndarray], path: str | Path) -> None:
    """Write a fixture: u64 seed plus named tensors, same tensor encoding."""
    with open(path, "wb") as fh:
        w = _Writer(fh)
        w.write(EEGF_MAGIC)
        w.write(struct.pack("<I", VERSION))
        w.write(struct.pack("<Q", seed))
        w.write(struct.pack("<I", len(tensors)))
        for name, array in tensors.items():
            _write_tensor(w, name, array)
        w.finish()
