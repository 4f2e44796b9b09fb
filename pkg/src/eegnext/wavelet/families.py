"""Mother-wavelet families and discrete sampling of scaled basis functions.

Conventions, shared by every family:

* The mother wavelet is a function of normalized time u; a basis function at
  scale ``a`` (in samples) is sampled on the grid u_k = k / a, which maps
  sample index k at rate fs to u = t_phys * fs / a. An oscillation
  exp(j*2*pi*C*u) therefore sits at physical frequency fs * C / a Hz.
* The returned vector is the complex conjugate of the mother (the form the
  transform correlates against) times the amplitude factor 1/sqrt(a), on a
  symmetric support truncated where the envelope falls below 1e-8 of its
  peak.

Family formulas (B = time-decay/bandwidth, C = normalized center frequency,
m = derivative/spline order):

* cmor:  psi(u) = (pi*B)^(-1/2) * exp(-u^2/B) * exp(j*2*pi*C*u)
* cgau:  psi(u) = N * d^m/du^m [ exp(-u^2/B) * exp(j*w_c*u) ] with w_c
  chosen so the energy-spectrum peak lands exactly at normalized frequency
  C (w_c = 2*pi*C - 2*m/(B*2*pi*C)), and N normalizing to unit L2 on the
  sampling grid.
* shan:  psi(u) = sqrt(B) * sinc(B*u) * exp(j*2*pi*C*u), compactly
  supported on |u| <= 10/B (a zero crossing of the sinc).
* fbsp:  psi(u) = sqrt(B) * sinc(B*u/m)^m * exp(j*2*pi*C*u), compactly
  supported on |u| <= 10*m/B.

The hard-banded families (shan, fbsp) additionally require that their upper
band edge stays below Nyquist after scaling: (C + B/2)/a <= 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import UnsupportedFamilyParam

FAMILIES = ("cmor", "cgau", "shan", "fbsp")

ENVELOPE_CUTOFF = 1e-8
SINC_LOBES = 10  # compact support of shan/fbsp, in sinc zero crossings


@dataclass(frozen=True)
class WaveletSpec:
    family: str
    B: float = 1.5
    C: float = 1.0
    m: int = 1

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise UnsupportedFamilyParam(
                f"unknown family {self.family!r}; expected one of {FAMILIES}"
            )
        if self.B <= 0:
            raise UnsupportedFamilyParam(f"B must be > 0, got {self.B}")
        if self.C <= 0:
            raise UnsupportedFamilyParam(f"C must be > 0, got {self.C}")
        if self.m < 1:
            raise UnsupportedFamilyParam(f"m must be >= 1, got {self.m}")


def _check_band(spec: WaveletSpec, a: float) -> None:
    # shan/fbsp have rectangular spectra; the scaled band must fit below
    # Nyquist or the sampled wavelet aliases structurally.
    upper = (spec.C + spec.B / 2.0) / a
    if upper > 0.5 + 1e-12:
        raise UnsupportedFamilyParam(
            f"{spec.family} band edge (C + B/2)/a = {upper:.4f} exceeds "
            f"Nyquist 0.5; increase the scale or shrink B"
        )


def _cgau_poly(spec: WaveletSpec) -> tuple[np.ndarray, float]:
    """Polynomial factor of the m-th derivative of exp(-u^2/B)*exp(j*w_c*u).

    Returns ascending complex coefficients p with
    d^m/du^m[g] = p(u) * exp(-u^2/B) * exp(j*w_c*u).
    """
    wc = 2.0 * math.pi * spec.C - 2.0 * spec.m / (spec.B * 2.0 * math.pi * spec.C)
    if wc <= 0:
        raise UnsupportedFamilyParam(
            f"cgau order m={spec.m} needs B*C^2 large enough that the "
            f"recentered frequency stays positive (got {wc:.4f})"
        )
    # f' = (-2u/B + j*wc) * f, so p_{k+1} = p_k' + p_k * (-2u/B + j*wc)
    p = np.array([1.0 + 0.0j])
    for _ in range(spec.m):
        deriv = p[1:] * np.arange(1, len(p))
        shifted = np.concatenate([[0.0], p]) * (-2.0 / spec.B)
        base = p * (1j * wc)
        n = max(len(deriv), len(shifted), len(base))
        q = np.zeros(n, dtype=complex)
        q[:len(deriv)] += deriv
        q[:len(shifted)] += shifted
        q[:len(base)] += base
        p = q
    return p, wc


def _polyval(coeffs: np.ndarray, u: np.ndarray) -> np.ndarray:
    out = np.zeros(u.shape, dtype=complex)
    for c in coeffs[::-1]:
        out = out * u + c
    return out


def _support_samples(spec: WaveletSpec, a: float) -> int:
    """Half-width K of the truncated support in samples (grid u_k = k/a)."""
    if spec.family == "cmor":
        u_max = math.sqrt(spec.B * math.log(1.0 / ENVELOPE_CUTOFF))
        return max(1, math.ceil(a * u_max))
    if spec.family == "cgau":
        # Polynomial-times-Gaussian envelope: scan a generous grid for the
        # last point above the cutoff.
        coeffs, _ = _cgau_poly(spec)
        u_max = math.sqrt(spec.B * math.log(1.0 / ENVELOPE_CUTOFF)) + 12.0
        k_hi = max(1, math.ceil(a * u_max))
        u = np.arange(k_hi + 1) / a
        env = np.abs(_polyval(coeffs, u)) * np.exp(-u * u / spec.B)
        above = np.nonzero(env > ENVELOPE_CUTOFF * env.max())[0]
        return max(1, min(int(above[-1]) + 1, k_hi))
    if spec.family == "shan":
        return max(1, math.ceil(a * SINC_LOBES / spec.B))
    # fbsp
    return max(1, math.ceil(a * SINC_LOBES * spec.m / spec.B))


def _mother_values(spec: WaveletSpec, u: np.ndarray, a: float) -> np.ndarray:
    """Evaluate the (unconjugated) mother wavelet on normalized times u."""
    if spec.family == "cmor":
        amp = (math.pi * spec.B) ** -0.5
        return amp * np.exp(-u * u / spec.B) * np.exp(2j * math.pi * spec.C * u)
    if spec.family == "cgau":
        coeffs, wc = _cgau_poly(spec)
        raw = _polyval(coeffs, u) * np.exp(-u * u / spec.B) * np.exp(1j * wc * u)
        norm = math.sqrt(float(np.sum(np.abs(raw) ** 2)) / a)
        return raw / norm
    if spec.family == "shan":
        _check_band(spec, a)
        edge = SINC_LOBES / spec.B
        vals = math.sqrt(spec.B) * np.sinc(spec.B * u) \
            * np.exp(2j * math.pi * spec.C * u)
        return np.where(np.abs(u) <= edge, vals, 0.0)
    _check_band(spec, a)
    edge = SINC_LOBES * spec.m / spec.B
    vals = math.sqrt(spec.B) * np.sinc(spec.B * u / spec.m) ** spec.m \
        * np.exp(2j * math.pi * spec.C * u)
    return np.where(np.abs(u) <= edge, vals, 0.0)


def sample_mother(spec: WaveletSpec, a: float, fs: float) -> tuple[np.ndarray, int]:
    """Sample the scaled, truncated mother wavelet (no conjugation).

    Returns (values, center) where values[k] holds
    a^(-1/2) * psi((k - center) / a) for k in [0, 2*center].
    """
    if a < 1:
        raise ValueError(f"scale a must be >= 1, got {a}")
    k = _support_samples(spec, a)
    u = np.arange(-k, k + 1, dtype=np.float64) / a
    return (a ** -0.5) * _mother_values(spec, u, a), k


def sample_wavelet(spec: WaveletSpec, a: float, fs: float) -> tuple[np.ndarray, int]:
    """Sample the conjugated basis function the CWT correlates against.

    Returns (values, center); values has odd length 2*center + 1 and its
    envelope at both ends is at most 1e-8 of the envelope peak.
    """
    values, center = sample_mother(spec, a, fs)
    return np.conjugate(values), center


def energy_spectrum(
    spec: WaveletSpec, a: float, fs: float, n_fft: int
) -> tuple[np.ndarray, np.ndarray]:
    """Energy spectral density of the sampled (analytic) wavelet.

    Returns (freqs_hz, density) with freqs ascending (fftshift layout). For
    the Gaussian-envelope families the density peaks within one bin of
    fs * C / a; the hard-banded families peak inside the mapped passband.
    """
    values, _ = sample_mother(spec, a, fs)
    support = len(values)
    if n_fft < support or (n_fft & (n_fft - 1)) != 0:
        raise ValueError(
            f"n_fft must be a power of two >= support {support}, got {n_fft}"
        )
    spectrum = np.fft.fft(values, n_fft)
    density = np.abs(spectrum) ** 2
    freqs = np.fft.fftfreq(n_fft, d=1.0 / fs)
    order = np.fft.fftshift(np.arange(n_fft))
    return freqs[order], density[order]
