"""Low-level helpers for the little-endian binary containers (EEGX/EEGS/EEGW).

All three containers share the same envelope: a 4-byte ASCII magic, a u32
version, a typed payload, and a trailing CRC32 (of every byte that precedes
it). The writer accumulates the running CRC as it goes; the reader verifies
it before handing any payload to the caller.
"""

from __future__ import annotations

import struct
import zlib
from typing import BinaryIO

import numpy as np

from .errors import BadMagic, ChecksumMismatch, TruncatedFile, VersionMismatch


class CrcWriter:
    """Wraps a binary stream, tracking the CRC32 of everything written."""

    def __init__(self, fh: BinaryIO):
        self._fh = fh
        self.crc = 0

    def write(self, data: bytes) -> None:
        self._fh.write(data)
        self.crc = zlib.crc32(data, self.crc)

    def write_u16(self, value: int) -> None:
        self.write(struct.pack("<H", value))

    def write_u32(self, value: int) -> None:
        self.write(struct.pack("<I", value))

    def write_i32(self, value: int) -> None:
        self.write(struct.pack("<i", value))

    def write_f32(self, value: float) -> None:
        self.write(struct.pack("<f", value))

    def write_str(self, text: str) -> None:
        raw = text.encode("utf-8")
        self.write_u16(len(raw))
        self.write(raw)

    def write_f32_array(self, arr: np.ndarray) -> None:
        self.write(np.ascontiguousarray(arr, dtype="<f4").tobytes())

    def finish(self) -> None:
        """Append the CRC32 footer (not itself included in the checksum)."""
        self._fh.write(struct.pack("<I", self.crc))


class CrcReader:
    """Wraps a byte buffer, tracking the CRC32 of everything consumed."""

    def __init__(self, data: bytes, path: str = "<bytes>"):
        self._data = data
        self._pos = 0
        self.crc = 0
        self.path = path

    def read(self, n: int) -> bytes:
        if self._pos + n > len(self._data):
            raise TruncatedFile(
                f"{self.path}: needed {n} bytes at offset {self._pos}, "
                f"file has {len(self._data)}"
            )
        chunk = self._data[self._pos:self._pos + n]
        self._pos += n
        self.crc = zlib.crc32(chunk, self.crc)
        return chunk

    def read_u16(self) -> int:
        return struct.unpack("<H", self.read(2))[0]

    def read_u32(self) -> int:
        return struct.unpack("<I", self.read(4))[0]

    def read_i32(self) -> int:
        return struct.unpack("<i", self.read(4))[0]

    def read_f32(self) -> float:
        return struct.unpack("<f", self.read(4))[0]

    def read_str(self) -> str:
        n = self.read_u16()
        return self.read(n).decode("utf-8")

    def read_f32_array(self, count: int, dims: tuple[int, ...]) -> np.ndarray:
        raw = self.read(4 * count)
        return np.frombuffer(raw, dtype="<f4").reshape(dims).copy()

    def expect_magic(self, magic: bytes) -> None:
        got = self.read(len(magic))
        if got != magic:
            raise BadMagic(f"{self.path}: expected magic {magic!r}, got {got!r}")

    def expect_version(self, version: int) -> None:
        got = self.read_u32()
        if got != version:
            raise VersionMismatch(
                f"{self.path}: container version {got}, expected {version}"
            )

    def verify_footer(self) -> None:
        """Check the trailing CRC32 against everything consumed so far."""
        expected = self.crc
        if self._pos + 4 > len(self._data):
            raise TruncatedFile(f"{self.path}: missing CRC32 footer")
        stored = struct.unpack("<I", self._data[self._pos:self._pos + 4])[0]
        self._pos += 4
        if stored != expected:
            raise ChecksumMismatch(
                f"{self.path}: stored CRC32 {stored:#010x} != computed {expected:#010x}"
            )
