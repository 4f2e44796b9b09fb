import numpy as np

from eegnext.nn.network import build_network
from eegnext.train.adamw import TrainConfig
from eegnext.train.head import extract_features, head_scores, train_head
from eegnext.train.metrics import predict
from eegnext.wavelet.scales import make_scales
from eegnext.wavelet.families import WaveletSpec
from eegnext.wavelet.transform import scalogram_batch

from conftest import make_trial


def _blobs(rng, n_per_class=60, dim=768, sep=4.0):
    centers = rng.standard_normal((2, dim))
    centers /= np.linalg.norm(centers, axis=1, keepdims=True)
    feats, labels = [], []
    for cls in range(2):
        pts = rng.standard_normal((n_per_class, dim)) + sep * centers[cls]
        feats.append(pts)
        labels.extend([cls] * n_per_class)
    return np.concatenate(feats).astype(np.float32), np.array(labels)


def test_separable_blobs_reach_high_accuracy(rng):
    feats, labels = _blobs(rng)
    cfg = TrainConfig(lr=1e-2, weight_decay=5e-4, epochs=10, batch_size=32, seed=0)
    w, b, history = train_head(feats, labels, cfg)
    preds = predict(head_scores(feats, w, b))
    assert (preds == labels).mean() >= 0.99
    assert history[-1] <= history[0]
    assert len(history) == 10


def test_tiny_lr_leaves_decay_only(rng):
    feats, labels = _blobs(rng, n_per_class=8)
    # lr must be positive; make it negligible so decay dominates
    cfg = TrainConfig(lr=1e-300, weight_decay=0.5, epochs=1, batch_size=16, seed=3)
    w, b, _ = train_head(feats, labels, cfg)
    rng2 = np.random.default_rng(3)
    from eegnext.nn.network import _trunc_normal
    w0 = _trunc_normal(rng2, (2, 768), 0.02).astype(np.float64)
    assert np.allclose(w, w0, atol=1e-7)  # one batch, decay factor ~1


def test_seeded_determinism(rng):
    feats, labels = _blobs(rng, n_per_class=20)
    cfg = TrainConfig(epochs=3, batch_size=16, seed=9)
    w1, b1, h1 = train_head(feats, labels, cfg)
    w2, b2, h2 = train_head(feats, labels, cfg)
    assert np.array_equal(w1, w2) and np.array_equal(b1, b2)
    assert h1 == h2
    cfg2 = TrainConfig(epochs=3, batch_size=16, seed=10)
    _, _, h3 = train_head(feats, labels, cfg2)
    assert h1 != h3


def test_step_count(rng):
    feats, labels = _blobs(rng, n_per_class=10)  # N = 20
    cfg = TrainConfig(epochs=4, batch_size=8, seed=0)
    # epochs * ceil(N / batch) = 4 * 3 = 12 steps; verify through the loss
    # history length (per-epoch) and determinism of the final weights
    _, _, history = train_head(feats, labels, cfg)
    assert len(history) == 4


def test_extract_features_shape_and_determinism():
    trials = [make_trial(f"s{i}", c=1, t=128, label=i % 2, seed=i) for i in range(3)]
    trials.append(trials[0])  # duplicate input
    scales = make_scales("linear", max_a=4.0)
    spec = WaveletSpec("cmor", B=1.5, C=1.0)
    sgs = scalogram_batch(trials, scales, spec)
    net = build_network(1, 4, 128, 2, seed=0)
    feats = extract_features(net, sgs, batch_size=2)
    assert feats.shape == (4, 768)
    assert np.array_equal(feats[0], feats[3])  # duplicate rows stay identical


def test_extract_features_threaded_matches_sequential():
    trials = [make_trial(f"s{i}", c=1, t=128, label=i % 2, seed=i) for i in range(6)]
    scales = make_scales("linear", max_a=4.0)
    spec = WaveletSpec("cmor", B=1.5, C=1.0)
    sgs = scalogram_batch(trials, scales, spec)
    net = build_network(1, 4, 128, 2, seed=0)
    serial = extract_features(net, sgs, batch_size=2, threads=1)
    threaded = extract_features(net, sgs, batch_size=2, threads=3)
    assert np.array_equal(serial, threaded)


def test_zero_input_features_identical_rows():
    from eegnext.wavelet.transform import Scalogram
    scales = make_scales("linear", max_a=4.0)
    zero = np.zeros((1, 4, 64), dtype=np.float32)
    sgs = [Scalogram(zero, scales, 100.0, 0, "a"),
           Scalogram(zero.copy(), scales, 100.0, 1, "b")]
    net = build_network(1, 4, 64, 2, seed=1)
    feats = extract_features(net, sgs)
    assert np.array_equal(feats[0], feats[1])
    assert np.isfinite(feats).all()
