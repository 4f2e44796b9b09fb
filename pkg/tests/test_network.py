import numpy as np
import pytest

from eegnext.errors import NonFiniteActivation, ShapeMismatch
from eegnext.nn.network import (
    block_param_count,
    build_network,
    forward,
    param_report,
)

TABLE_ROWS = {
    "patchify": 4608 + 96,
    "ln0": 96 + 96,
    "stage1": 237600,
    "ln1": 96 + 96,
    "down1": 73728 + 192,
    "stage2": 917568,
    "ln2": 192 + 192,
    "down2": 294912 + 384,
    "stage3": 10813824,
    "ln3": 384 + 384,
    "down3": 1179648 + 768,
    "stage4": 14287104,
    "ln4": 768 + 768,
}


def test_param_report_matches_table():
    net = build_network(1, 50, 3000, 6, seed=0)
    rows = {r["row"]: r["count"] for r in param_report(net)}
    assert rows["stem.conv"] == 147 + 3  # single-channel instance
    for label, count in TABLE_ROWS.items():
        assert rows[label] == count, label
    assert rows["head"] == 768 * 6 + 6
    assert rows["total"] == sum(v for k, v in rows.items() if k != "total")


def test_stem_scales_with_input_channels():
    for c in (2, 22):
        net = build_network(c, 50, 100, 4, seed=0)
        rows = {r["row"]: r["count"] for r in param_report(net)}
        assert rows["stem.conv"] == 3 * c * 49 + 3


def test_block_param_counts():
    assert block_param_count(96) == 79200
    assert 3 * block_param_count(96) == 237600
    assert 3 * block_param_count(192) == 917568
    assert block_param_count(384) == 1201536
    assert 9 * block_param_count(384) == 10813824
    assert 3 * block_param_count(768) == 14287104


def test_block_tensor_shapes():
    net = build_network(1, 8, 8, 2, seed=0)
    p = net.params
    assert p["stage1.block0.dw.w"].shape == (96, 1, 7, 7)
    assert p["stage1.block0.fc1.w"].shape == (384, 96)
    assert p["stage1.block0.fc2.w"].shape == (96, 384)
    assert p["stage3.block8.fc1.w"].shape == (1536, 384)
    assert p["down2.w"].shape == (384, 192, 2, 2)
    assert p["head.w"].shape == (2, 768)


EXPECTED_TAPS = [
    ("stem.conv", lambda s, t, l: (3, s, t)),
    ("stem.gelu", lambda s, t, l: (3, s, t)),
    ("resize", lambda s, t, l: (3, 64, 64)),
    ("patchify", lambda s, t, l: (96, 16, 16)),
    ("ln0", lambda s, t, l: (96, 16, 16)),
    ("stage1.block2", lambda s, t, l: (96, 16, 16)),
    ("ln1", lambda s, t, l: (96, 16, 16)),
    ("down1", lambda s, t, l: (192, 8, 8)),
    ("stage2.block2", lambda s, t, l: (192, 8, 8)),
    ("ln2", lambda s, t, l: (192, 8, 8)),
    ("down2", lambda s, t, l: (384, 4, 4)),
    ("stage3.block8", lambda s, t, l: (384, 4, 4)),
    ("ln3", lambda s, t, l: (384, 4, 4)),
    ("down3", lambda s, t, l: (768, 2, 2)),
    ("stage4.block2", lambda s, t, l: (768, 2, 2)),
    ("pool", lambda s, t, l: (768, 1, 1)),
    ("ln4", lambda s, t, l: (768, 1, 1)),
    ("features", lambda s, t, l: (768,)),
    ("logits", lambda s, t, l: (l,)),
]


def test_shape_chain_small():
    c, s, t, l = 2, 20, 40, 5
    net = build_network(c, s, t, l, seed=1)
    x = np.random.default_rng(0).standard_normal((2, c, s, t)).astype(np.float32)
    logits, taps = forward(net, x, want_taps=True)
    assert logits.shape == (2, l)
    for name, shape_fn in EXPECTED_TAPS:
        assert taps[name].shape == (2, *shape_fn(s, t, l)), name
        assert np.isfinite(taps[name]).all(), name


def test_forward_zero_input_uniform_logits():
    net = build_network(2, 10, 20, 4, seed=0)
    # zero-initialized head bias + zero head weight rows on pool output of
    # zero input need not be zero, but logits must be equal across classes
    net.params["head.w"] = np.zeros_like(net.params["head.w"])
    logits = forward(net, np.zeros((1, 2, 10, 20), dtype=np.float32))
    assert np.allclose(logits, logits[0, 0])


def test_batch_independence_zero_ulp():
    net = build_network(2, 12, 24, 3, seed=2)
    rng = np.random.default_rng(3)
    batch = rng.standard_normal((8, 2, 12, 24)).astype(np.float32)
    single = forward(net, batch[5:6])
    full = forward(net, batch)
    assert np.array_equal(single[0], full[5])


def test_forward_deterministic():
    net = build_network(1, 10, 10, 2, seed=4)
    x = np.random.default_rng(5).standard_normal((2, 1, 10, 10)).astype(np.float32)
    assert np.array_equal(forward(net, x), forward(net, x))


def test_same_seed_same_network():
    a = build_network(2, 8, 8, 3, seed=7)
    b = build_network(2, 8, 8, 3, seed=7)
    assert all(np.array_equal(a.params[k], b.params[k]) for k in a.params)
    c = build_network(2, 8, 8, 3, seed=8)
    assert any(not np.array_equal(a.params[k], c.params[k]) for k in a.params)


def test_shape_mismatch_errors():
    net = build_network(2, 10, 20, 4, seed=0)
    with pytest.raises(ShapeMismatch):
        forward(net, np.zeros((1, 3, 10, 20), dtype=np.float32))
    with pytest.raises(ShapeMismatch):
        forward(net, np.zeros((1, 2, 11, 20), dtype=np.float32))
    with pytest.raises(ShapeMismatch):
        forward(net, np.zeros((2, 10, 20), dtype=np.float32))


def test_non_finite_activation_named():
    net = build_network(1, 8, 8, 2, seed=0)
    net.params["patchify.b"] = np.full_like(net.params["patchify.b"], np.nan)
    with pytest.raises(NonFiniteActivation) as err:
        forward(net, np.zeros((1, 1, 8, 8), dtype=np.float32))
    assert "patchify" in str(err.value)


def test_backbone_only_network():
    net = build_network(3, 64, 64, 10, seed=0, include_stem=False)
    assert "stem.conv.w" not in net.params
    x = np.random.default_rng(1).standard_normal((1, 3, 64, 64)).astype(np.float32)
    logits, taps = forward(net, x, want_taps=True)
    assert logits.shape == (1, 10)
    assert taps["resize"].shape == (1, 3, 64, 64)
    rows = {r["row"] for r in param_report(net)}
    assert "stem.conv" not in rows


def test_truncated_normal_init_bounds():
    net = build_network(1, 8, 8, 2, seed=0)
    w = net.params["stage3.block0.fc1.w"]
    assert np.abs(w).max() <= 2 * 0.02 + 1e-6
    assert 0.015 < w.std() < 0.025
