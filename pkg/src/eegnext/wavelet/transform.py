"""Continuous wavelet transform and scalogram tensors.

Each output row is the discrete approximation of the wavelet integral:
the cross-correlation of the signal with the sampled, conjugated basis
function, times the sample period 1/fs (a Riemann sum). Rows are computed
by frequency-domain convolution, zero padded to the next power of two at
or above T + support - 1, and aligned so column b is translation b/fs
seconds.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..errors import EdgeDominated, NonFiniteInput
from ..ingest.epochs import Trial
from .families import WaveletSpec, sample_wavelet
from .scales import ScaleSet


@dataclass
class Scalogram:
    """C x S x T nonnegative magnitude tensor of one trial's CWT."""

    data: np.ndarray  # float32, (C, S, T)
    scales: ScaleSet
    fs: float
    label: int
    subject_id: str


def _next_pow2(n: int) -> int:
    return 1 << max(0, (n - 1).bit_length())


def cwt(
    signal: np.ndarray, fs: float, scales: ScaleSet, spec: WaveletSpec
) -> np.ndarray:
    """CWT of a length-T vector; returns an (S, T) complex128 matrix."""
    x = np.asarray(signal, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"signal must be 1-D, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise NonFiniteInput("signal contains NaN or Inf")
    t = x.shape[0]

    kernels = [sample_wavelet(spec, a, fs) for a in scales.scales]
    max_support = max(2 * k + 1 for _, k in kernels)
    if t < max_support:
        raise EdgeDominated(
            f"signal length {t} shorter than longest wavelet support "
            f"{max_support}; reduce max scale or provide a longer signal"
        )

    out = np.empty((len(kernels), t), dtype=np.complex128)
    for row, (psi, center) in enumerate(kernels):
        support = psi.shape[0]
        n_fft = _next_pow2(t + support - 1)
        # Cross-correlation via convolution with the reversed kernel.
        spectrum = np.fft.fft(x, n_fft) * np.fft.fft(psi[::-1], n_fft)
        full = np.fft.ifft(spectrum)
        out[row] = full[center:center + t] / fs
    return out


def scalogram(
    trial: Trial, scales: ScaleSet, spec: WaveletSpec, power: bool = False
) -> Scalogram:
    """Per-channel CWT magnitudes stacked into a (C, S, T) float32 tensor."""
    c, t = trial.data.shape
    data = np.empty((c, len(scales), t), dtype=np.float32)
    for ch in range(c):
        mag = np.abs(cwt(trial.data[ch], trial.fs, scales, spec))
        if power:
            mag = mag * mag
        data[ch] = mag.astype(np.float32)
    return Scalogram(
        data=data,
        scales=scales,
        fs=trial.fs,
        label=trial.label,
        subject_id=trial.subject_id,
    )


def scalogram_batch(
    trials: list[Trial],
    scales: ScaleSet,
    spec: WaveletSpec,
    power: bool = False,
    threads: int = 1,
) -> list[Scalogram]:
    """Scalograms for many trials; order matches the input list."""
    if threads <= 1 or len(trials) <= 1:
        return [scalogram(tr, scales, spec, power) for tr in trials]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda tr: scalogram(tr, scales, spec, power), trials))
