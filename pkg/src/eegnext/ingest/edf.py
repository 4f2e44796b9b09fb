"""EDF (European Data Format) header parsing and signal extraction.

Layout: a 256-byte ASCII main header, then 256 bytes of per-signal header
fields (each field stored contiguously for all signals), then data records
of int16 little-endian samples. Only continuous EDF is supported; EDF+
annotation grammar is out of scope (labels arrive via CSV sidecars).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import (
    InconsistentHeader,
    MalformedNumeric,
    RateMismatch,
    TruncatedHeader,
    TruncatedRecord,
    UnknownChannel,
)

_MAIN_HEADER_BYTES = 256
_PER_SIGNAL_BYTES = 256


@dataclass
class EdfSignalHeader:
    label: str
    transducer: str
    phys_dim: str
    phys_min: float
    phys_max: float
    dig_min: int
    dig_max: int
    prefiltering: str
    samples_per_record: int


@dataclass
class EdfHeader:
    version: str
    patient_id: str
    recording_id: str
    start_date: str
    start_time: str
    header_bytes: int
    n_records: int
    record_duration_s: float
    n_signals: int
    signals: list[EdfSignalHeader]

    @property
    def labels(self) -> list[str]:
        return [s.label for s in self.signals]

    def record_bytes(self) -> int:
        return 2 * sum(s.samples_per_record for s in self.signals)


def _ascii(raw: bytes) -> str:
    return raw.decode("latin-1").strip()


def _int_field(raw: bytes, what: str) -> int:
    text = _ascii(raw)
    try:
        return int(text)
    except ValueError:
        raise MalformedNumeric(f"{what}: {text!r} is not an integer") from None


def _float_field(raw: bytes, what: str) -> float:
    text = _ascii(raw)
    try:
        return float(text)
    except ValueError:
        raise MalformedNumeric(f"{what}: {text!r} is not a number") from None


def parse_edf_header(data: bytes) -> EdfHeader:
    """Parse the fixed main header plus all per-signal header blocks."""
    if len(data) < _MAIN_HEADER_BYTES:
        raise TruncatedHeader(
            f"need at least {_MAIN_HEADER_BYTES} header bytes, got {len(data)}"
        )

    version = _ascii(data[0:8])
    patient_id = _ascii(data[8:88])
    recording_id = _ascii(data[88:168])
    start_date = _ascii(data[168:176])
    start_time = _ascii(data[176:184])
    header_bytes = _int_field(data[184:192], "header_bytes")
    # bytes 192:236 reserved
    n_records = _int_field(data[236:244], "n_records")
    record_duration_s = _float_field(data[244:252], "record_duration_s")
    n_signals = _int_field(data[252:256], "n_signals")

    if n_signals < 1:
        raise InconsistentHeader(f"n_signals must be >= 1, got {n_signals}")
    if n_records < 0:
        raise InconsistentHeader(f"n_records must be >= 0, got {n_records}")
    expected = _MAIN_HEADER_BYTES + _PER_SIGNAL_BYTES * n_signals
    if header_bytes != expected:
        raise InconsistentHeader(
            f"header_bytes={header_bytes} but 256 + 256*{n_signals} = {expected}"
        )
    if len(data) < header_bytes:
        raise TruncatedHeader(
            f"header declares {header_bytes} bytes, only {len(data)} available"
        )

    # Per-signal fields are stored field-major: all labels, all transducers, ...
    pos = _MAIN_HEADER_BYTES

    def block(width: int) -> list[bytes]:
        nonlocal pos
        out = [data[pos + i * width:pos + (i + 1) * width] for i in range(n_signals)]
        pos += width * n_signals
        return out

    labels = [_ascii(b) for b in block(16)]
    transducers = [_ascii(b) for b in block(80)]
    phys_dims = [_ascii(b) for b in block(8)]
    phys_mins = [_float_field(b, "phys_min") for b in block(8)]
    phys_maxs = [_float_field(b, "phys_max") for b in block(8)]
    dig_mins = [_int_field(b, "dig_min") for b in block(8)]
    dig_maxs = [_int_field(b, "dig_max") for b in block(8)]
    prefilterings = [_ascii(b) for b in block(80)]
    samples = [_int_field(b, "samples_per_record") for b in block(8)]
    block(32)  # reserved

    signals = []
    for i in range(n_signals):
        if dig_mins[i] >= dig_maxs[i]:
            raise InconsistentHeader(
                f"signal {labels[i]!r}: dig_min {dig_mins[i]} >= dig_max {dig_maxs[i]}"
            )
        if phys_mins[i] == phys_maxs[i]:
            raise InconsistentHeader(
                f"signal {labels[i]!r}: phys_min == phys_max == {phys_mins[i]}"
            )
        signals.append(EdfSignalHeader(
            label=labels[i],
            transducer=transducers[i],
            phys_dim=phys_dims[i],
            phys_min=phys_mins[i],
            phys_max=phys_maxs[i],
            dig_min=dig_mins[i],
            dig_max=dig_maxs[i],
            prefiltering=prefilterings[i],
            samples_per_record=samples[i],
        ))

    return EdfHeader(
        version=version,
        patient_id=patient_id,
        recording_id=recording_id,
        start_date=start_date,
        start_time=start_time,
        header_bytes=header_bytes,
        n_records=n_records,
        record_duration_s=record_duration_s,
        n_signals=n_signals,
        signals=signals,
    )


def read_edf_signals(
    data: bytes, header: EdfHeader, channel_names: list[str]
) -> dict[str, np.ndarray]:
    """Extract the requested channels as calibrated physical float64 series.

    Digital sample d maps to phys_min + (d - dig_min) * (phys_max - phys_min)
    / (dig_max - dig_min). Channels are returned in the requested order; all
    requested channels must share samples_per_record (no resampling here).
    """
    label_to_index: dict[str, int] = {}
    for i, lab in enumerate(header.labels):
        label_to_index.setdefault(lab, i)
    indices = []
    for name in channel_names:
        if name not in label_to_index:
            raise UnknownChannel(
                f"channel {name!r} not in file (have: {header.labels})"
            )
        indices.append(label_to_index[name])

    rates = {header.signals[i].samples_per_record for i in indices}
    if len(rates) > 1:
        raise RateMismatch(
            f"requested channels have differing samples_per_record: {sorted(rates)}"
        )

    record_bytes = header.record_bytes()
    body = data[header.header_bytes:]
    need = header.n_records * record_bytes
    if len(body) < need:
        raise TruncatedRecord(
            f"file has {len(body)} data bytes, header declares "
            f"{header.n_records} records of {record_bytes} bytes"
        )

    # Byte offset of each signal inside one record.
    offsets = np.cumsum([0] + [2 * s.samples_per_record for s in header.signals])

    out: dict[str, np.ndarray] = {}
    for name, sig_idx in zip(channel_names, indices):
        sig = header.signals[sig_idx]
        spr = sig.samples_per_record
        series = np.empty(header.n_records * spr, dtype=np.float64)
        scale = (sig.phys_max - sig.phys_min) / (sig.dig_max - sig.dig_min)
        for rec in range(header.n_records):
            start = rec * record_bytes + offsets[sig_idx]
            raw = body[start:start + 2 * spr]
            digital = np.frombuffer(raw, dtype="<i2").astype(np.float64)
            series[rec * spr:(rec + 1) * spr] = sig.phys_min + (digital - sig.dig_min) * scale
        out[name] = series
    return out
