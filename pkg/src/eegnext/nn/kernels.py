"""CPU tensor kernels: convolution, layer normalization, GELU, resizing.

All kernels take and return float32 arrays but accumulate dot products and
statistics in float64. Batch samples are processed independently, so a row's
result is bit-identical whether it arrives alone or inside a larger batch.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.special import erf

from ..errors import GroupMismatch, ShapeMismatch

# Upper bound on the float64 scratch for one GEMM chunk (~64 MiB).
_CHUNK_ELEMS = 8_000_000


def _out_size(size: int, kernel: int, stride: int, pad: int) -> int:
    return (size + 2 * pad - kernel) // stride + 1


def conv2d(
    x: np.ndarray,
    w: np.ndarray,
    b: np.ndarray,
    stride: tuple[int, int] = (1, 1),
    padding: tuple[int, int] = (0, 0),
    groups: int = 1,
) -> np.ndarray:
    """Grouped 2-D cross-correlation with bias and zero padding.

    x: (N, Cin, H, W); w: (Cout, Cin/groups, kh, kw); b: (Cout,).
    """
    if x.ndim != 4 or w.ndim != 4:
        raise ShapeMismatch(f"conv2d expects 4-D x and w, got {x.shape}, {w.shape}")
    n, c_in, h, wd = x.shape
    c_out, c_per_group, kh, kw = w.shape
    if c_in % groups or c_out % groups:
        raise GroupMismatch(
            f"groups={groups} must divide Cin={c_in} and Cout={c_out}"
        )
    if c_per_group != c_in // groups:
        raise ShapeMismatch(
            f"weight expects {c_per_group} channels/group, input has {c_in // groups}"
        )
    if b.shape != (c_out,):
        raise ShapeMismatch(f"bias shape {b.shape} != ({c_out},)")
    sh, sw = stride
    ph, pw = padding
    h_out = _out_size(h, kh, sh, ph)
    w_out = _out_size(wd, kw, sw, pw)
    if h_out < 1 or w_out < 1:
        raise ShapeMismatch(
            f"empty output for input {h}x{wd}, kernel {kh}x{kw}, "
            f"stride {stride}, padding {padding}"
        )

    out = np.empty((n, c_out, h_out, w_out), dtype=np.float32)
    g_out = c_out // groups
    g_in = c_in // groups
    w64 = w.astype(np.float64).reshape(groups, g_out, g_in * kh * kw)
    b64 = b.astype(np.float64)
    k_flat = g_in * kh * kw
    rows_per_chunk = max(1, _CHUNK_ELEMS // max(1, w_out * k_flat))

    for i in range(n):
        xi = x[i].astype(np.float64)
        if ph or pw:
            xi = np.pad(xi, ((0, 0), (ph, ph), (pw, pw)))
        windows = sliding_window_view(xi, (kh, kw), axis=(1, 2))[:, ::sh, ::sw]
        for g in range(groups):
            wg = w64[g]  # (g_out, k_flat)
            bg = b64[g * g_out:(g + 1) * g_out]
            view = windows[g * g_in:(g + 1) * g_in]  # (g_in, H', W', kh, kw)
            for row0 in range(0, h_out, rows_per_chunk):
                row1 = min(row0 + rows_per_chunk, h_out)
                patch = view[:, row0:row1].transpose(1, 2, 0, 3, 4).reshape(
                    (row1 - row0) * w_out, k_flat
                )
                res = patch @ wg.T + bg
                out[i, g * g_out:(g + 1) * g_out, row0:row1] = (
                    res.reshape(row1 - row0, w_out, g_out)
                    .transpose(2, 0, 1)
                    .astype(np.float32)
                )
    return out


def depthwise_conv7(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> np.ndarray:
    """7x7 depthwise convolution, stride 1, padding 3 (shape preserving).

    x: (N, C, H, W); w: (C, 1, 7, 7); b: (C,). Output channel c depends on
    input channel c only.
    """
    if x.ndim != 4:
        raise ShapeMismatch(f"expected 4-D input, got {x.shape}")
    n, c, h, wd = x.shape
    if w.shape != (c, 1, 7, 7):
        raise ShapeMismatch(f"weight shape {w.shape} != ({c}, 1, 7, 7)")
    if b.shape != (c,):
        raise ShapeMismatch(f"bias shape {b.shape} != ({c},)")

    w64 = w.astype(np.float64)[:, 0]
    b64 = b.astype(np.float64)
    out = np.empty_like(x)
    for i in range(n):
        xi = np.pad(x[i].astype(np.float64), ((0, 0), (3, 3), (3, 3)))
        windows = sliding_window_view(xi, (7, 7), axis=(1, 2))
        res = np.einsum("chwpq,cpq->chw", windows, w64) + b64[:, None, None]
        out[i] = res.astype(np.float32)
    return out


def _layernorm_lastdim(
    x: np.ndarray, gain: np.ndarray, bias: np.ndarray, eps: float
) -> np.ndarray:
    x64 = x.astype(np.float64)
    mean = x64.mean(axis=-1, keepdims=True)
    var = x64.var(axis=-1, keepdims=True)  # biased
    normed = (x64 - mean) / np.sqrt(var + eps)
    return (normed * gain.astype(np.float64) + bias.astype(np.float64)).astype(np.float32)


def layernorm_channels(
    x: np.ndarray, gain: np.ndarray, bias: np.ndarray, eps: float = 1e-6
) -> np.ndarray:
    """Normalize the channel vector at each (n, h, w) position, then affine.

    x: (N, C, H, W); gain, bias: (C,). Biased variance, eps inside the
    square root.
    """
    if x.ndim != 4:
        raise ShapeMismatch(f"expected 4-D input, got {x.shape}")
    if gain.shape != (x.shape[1],) or bias.shape != (x.shape[1],):
        raise ShapeMismatch(
            f"gain/bias shapes {gain.shape}/{bias.shape} != ({x.shape[1]},)"
        )
    moved = x.transpose(0, 2, 3, 1)
    return _layernorm_lastdim(moved, gain, bias, eps).transpose(0, 3, 1, 2)


def gelu(x: np.ndarray) -> np.ndarray:
    """Exact GELU x * Phi(x) with Phi the standard normal CDF (erf form)."""
    x64 = np.asarray(x, dtype=np.float64)
    y = x64 * 0.5 * (1.0 + erf(x64 / np.sqrt(2.0)))
    return y.astype(x.dtype) if isinstance(x, np.ndarray) else y


def nearest_resize(x: np.ndarray, out_hw: tuple[int, int] = (64, 64)) -> np.ndarray:
    """Nearest-neighbor resize: out[i, j] = in[floor(i*H/oh), floor(j*W/ow)]."""
    if x.ndim != 4:
        raise ShapeMismatch(f"expected 4-D input, got {x.shape}")
    h, w = x.shape[2], x.shape[3]
    oh, ow = out_hw
    rows = (np.arange(oh) * h) // oh
    cols = (np.arange(ow) * w) // ow
    return np.ascontiguousarray(x[:, :, rows[:, None], cols[None, :]])


def adaptive_avg_pool(x: np.ndarray) -> np.ndarray:
    """Global average pool to (N, C, 1, 1), accumulated in float64."""
    if x.ndim != 4:
        raise ShapeMismatch(f"expected 4-D input, got {x.shape}")
    pooled = x.astype(np.float64).mean(axis=(2, 3), keepdims=True)
    return pooled.astype(np.float32)


def linear(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Affine map on the last axis: y = x @ w.T + b; w is (out, in)."""
    if w.ndim != 2 or x.shape[-1] != w.shape[1]:
        raise ShapeMismatch(f"linear: x {x.shape} incompatible with w {w.shape}")
    if b.shape != (w.shape[0],):
        raise ShapeMismatch(f"bias shape {b.shape} != ({w.shape[0]},)")
    y = x.astype(np.float64) @ w.astype(np.float64).T + b.astype(np.float64)
    return y.astype(np.float32)


def cnblock(x: np.ndarray, params: dict[str, np.ndarray], eps: float = 1e-6) -> np.ndarray:
    """ConvNeXt residual block: x + fc2(gelu(fc1(ln(dwconv(x))))).

    params keys: dw.w, dw.b, ln.g, ln.b, fc1.w, fc1.b, fc2.w, fc2.b. The
    pointwise layers act on the channel vector at each spatial position
    (inverted bottleneck C -> 4C -> C).
    """
    y = depthwise_conv7(x, params["dw.w"], params["dw.b"])
    y = y.transpose(0, 2, 3, 1)  # (N, H, W, C)
    y = _layernorm_lastdim(y, params["ln.g"], params["ln.b"], eps)
    y = linear(y, params["fc1.w"], params["fc1.b"])
    y = gelu(y)
    y = linear(y, params["fc2.w"], params["fc2.b"])
    return x + y.transpose(0, 3, 1, 2)
