"""Wavelet basis functions, CWT, scalograms, and the EEGS container."""

from .families import (
    ENVELOPE_CUTOFF,
    FAMILIES,
    WaveletSpec,
    energy_spectrum,
    sample_mother,
    sample_wavelet,
)
from .scales import (
    MODE_DYADIC,
    MODE_LINEAR,
    ScaleSet,
    make_scales,
    scale_set_from_values,
)
from .store import read_scalogram_set, write_scalogram_set
from .transform import Scalogram, cwt, scalogram, scalogram_batch

__all__ = [
    "ENVELOPE_CUTOFF",
    "FAMILIES",
    "MODE_DYADIC",
    "MODE_LINEAR",
    "ScaleSet",
    "Scalogram",
    "WaveletSpec",
    "cwt",
    "energy_spectrum",
    "make_scales",
    "read_scalogram_set",
    "sample_mother",
    "sample_wavelet",
    "scale_set_from_values",
    "scalogram",
    "scalogram_batch",
    "write_scalogram_set",
]
