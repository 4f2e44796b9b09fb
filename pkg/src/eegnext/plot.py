"""Diagnostic image emission as binary P6 portable pixmaps.

Two renderers: scalogram heatmaps (one pixel per (scale, time) cell under a
fixed 256-entry viridis-like colormap) and wavelet trace/spectrum panels
drawn as polylines on a white canvas. Uncompressed PPM keeps the artifact
dependency-free and byte-deterministic.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import ChannelOutOfRange
from .wavelet.families import WaveletSpec, energy_spectrum, sample_wavelet
from .wavelet.transform import Scalogram

# Anchor colors of the viridis gradient, interpolated to 256 entries.
_VIRIDIS_ANCHORS = np.array([
    (68, 1, 84), (72, 40, 120), (62, 74, 137), (49, 104, 142),
    (38, 130, 142), (31, 158, 137), (53, 183, 121), (109, 205, 89),
    (180, 222, 44), (253, 231, 37),
], dtype=np.float64)


def _build_colormap() -> np.ndarray:
    positions = np.linspace(0.0, 1.0, len(_VIRIDIS_ANCHORS))
    xs = np.linspace(0.0, 1.0, 256)
    channels = [np.interp(xs, positions, _VIRIDIS_ANCHORS[:, c]) for c in range(3)]
    return np.stack(channels, axis=1).round().astype(np.uint8)


COLORMAP = _build_colormap()

RGB_REAL = (31, 119, 180)     # blue
RGB_IMAG = (255, 127, 14)     # orange
RGB_SPECTRUM = (68, 1, 84)    # dark violet


def write_ppm(pixels: np.ndarray, path: str | Path) -> None:
    """Write an (H, W, 3) uint8 array as binary P6."""
    h, w, _ = pixels.shape
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        fh.write(pixels.astype(np.uint8).tobytes())


def read_ppm(path: str | Path) -> np.ndarray:
    raw = Path(path).read_bytes()
    fields: list[bytes] = []
    pos = 0
    while len(fields) < 4:
        while pos < len(raw) and raw[pos:pos + 1].isspace():
            pos += 1
        start = pos
        while pos < len(raw) and not raw[pos:pos + 1].isspace():
            pos += 1
        fields.append(raw[start:pos])
    if fields[0] != b"P6":
        raise ValueError(f"{path}: not a binary PPM")
    w, h = int(fields[1]), int(fields[2])
    pos += 1  # single whitespace after maxval
    return np.frombuffer(raw[pos:pos + w * h * 3], dtype=np.uint8).reshape(h, w, 3)


def plot_scalogram(sg: Scalogram, channel: int, path: str | Path) -> None:
    """Render one channel as an S x T heatmap; row 0 is the smallest scale."""
    if not 0 <= channel < sg.data.shape[0]:
        raise ChannelOutOfRange(
            f"channel {channel} out of range for {sg.data.shape[0]} channels"
        )
    plane = sg.data[channel].astype(np.float64)
    lo, hi = plane.min(), plane.max()
    if hi > lo:
        normed = (plane - lo) / (hi - lo)
    else:
        normed = np.zeros_like(plane)
    indices = np.clip((normed * 255).round().astype(np.int64), 0, 255)
    write_ppm(COLORMAP[indices], path)


def _draw_polyline(canvas: np.ndarray, xs: np.ndarray, ys: np.ndarray, rgb) -> None:
    """Rasterize line segments with a dense parametric walk."""
    h, w, _ = canvas.shape
    color = np.array(rgb, dtype=np.uint8)
    for i in range(len(xs) - 1):
        x0, y0, x1, y1 = xs[i], ys[i], xs[i + 1], ys[i + 1]
        steps = int(max(abs(x1 - x0), abs(y1 - y0))) + 1
        ts = np.linspace(0.0, 1.0, steps + 1)
        px = np.clip(np.round(x0 + ts * (x1 - x0)).astype(int), 0, w - 1)
        py = np.clip(np.round(y0 + ts * (y1 - y0)).astype(int), 0, h - 1)
        canvas[py, px] = color


def _trace_panel(canvas: np.ndarray, x0: int, width: int, series: list, colors) -> None:
    h = canvas.shape[0]
    margin = 8
    lo = min(s.min() for s in series)
    hi = max(s.max() for s in series)
    span = hi - lo if hi > lo else 1.0
    for values, rgb in zip(series, colors):
        n = len(values)
        xs = x0 + margin + (np.arange(n) / max(1, n - 1)) * (width - 2 * margin)
        ys = (h - margin) - ((values - lo) / span) * (h - 2 * margin)
        _draw_polyline(canvas, xs, ys, rgb)


def plot_wavelet(
    spec: WaveletSpec, a: float, fs: float, path: str | Path,
    panel_size: tuple[int, int] = (384, 288),
) -> None:
    """Two side-by-side panels: real/imag traces and energy spectral density."""
    width, height = panel_size
    canvas = np.full((height, 2 * width, 3), 255, dtype=np.uint8)

    values, _ = sample_wavelet(spec, a, fs)
    _trace_panel(
        canvas, 0, width,
        [values.real, values.imag],
        [RGB_REAL, RGB_IMAG],
    )

    support = len(values)
    n_fft = 1 << max(8, (support - 1).bit_length())
    freqs, density = energy_spectrum(spec, a, fs, n_fft)
    positive = freqs >= 0
    _trace_panel(canvas, width, width, [density[positive]], [RGB_SPECTRUM])

    # thin divider between panels
    canvas[:, width - 1:width + 1] = (200, 200, 200)
    write_ppm(canvas, path)
