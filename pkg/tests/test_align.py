import numpy as np
import pytest

from eegnext.align import (
    align_all,
    align_subject,
    inv_sqrt_spd,
    mean_covariance,
    whiten_trials,
)
from eegnext.errors import (
    EmptyTrialList,
    MixedChannelCounts,
    MixedSubjects,
    NonSymmetric,
    SingularCovariance,
)
from eegnext.ingest.epochs import Trial

from conftest import make_trial


def _random_spd(rng, c):
    a = rng.standard_normal((c, c))
    return a @ a.T + c * np.eye(c)


def test_identity_trial_covariance():
    x = np.eye(4, dtype=np.float32)
    tr = Trial("s", [f"c{i}" for i in range(4)], x, 100.0, 0, 0)
    cov = mean_covariance([tr])
    assert np.allclose(cov.sigma, np.eye(4), atol=1e-12)


def test_two_scalar_trials():
    t1 = Trial("s", ["c"], np.array([[2.0]]), 1.0, 0, 0)
    t2 = Trial("s", ["c"], np.array([[4.0]]), 1.0, 0, 1)
    cov = mean_covariance([t1, t2])
    assert cov.sigma[0, 0] == 10.0
    assert cov.n_trials == 2


def test_mean_matches_bruteforce(rng):
    trials = [make_trial("s", c=4, t=30, seed=i) for i in range(7)]
    cov = mean_covariance(trials)
    acc = np.zeros((4, 4))
    for tr in trials:
        x = tr.data.astype(np.float64)
        acc += x @ x.T
    brute = acc / 7
    assert np.abs(cov.sigma - brute).max() <= 1e-12 * max(1.0, np.abs(brute).max())


def test_mean_covariance_errors():
    with pytest.raises(EmptyTrialList):
        mean_covariance([])
    with pytest.raises(MixedSubjects):
        mean_covariance([make_trial("a"), make_trial("b")])
    with pytest.raises(MixedChannelCounts):
        mean_covariance([make_trial("a", c=2), make_trial("a", c=3)])


def test_inv_sqrt_scalar_and_diagonal():
    assert np.allclose(inv_sqrt_spd(4.0 * np.eye(2)).w, 0.5 * np.eye(2), atol=1e-12)
    assert np.allclose(
        inv_sqrt_spd(np.diag([1.0, 9.0])).w, np.diag([1.0, 1.0 / 3.0]), atol=1e-12
    )


def test_inv_sqrt_whitens_random_spd(rng):
    sigma = _random_spd(rng, 6)
    w = inv_sqrt_spd(sigma).w
    assert np.linalg.norm(w @ sigma @ w - np.eye(6)) <= 1e-8


def test_inv_sqrt_is_unique_spd_root(rng):
    sigma = _random_spd(rng, 5)
    w = inv_sqrt_spd(sigma).w
    eigvals = np.linalg.eigvalsh(w)
    assert eigvals.min() > 0  # positive definite
    assert np.abs(w @ w - np.linalg.inv(sigma)).max() <= 1e-8 * np.abs(np.linalg.inv(sigma)).max()


def test_scale_equivariance(rng):
    sigma = _random_spd(rng, 4)
    for alpha in (0.3, 2.0, 17.5):
        w1 = inv_sqrt_spd(alpha * sigma).w
        w2 = inv_sqrt_spd(sigma).w * alpha ** -0.5
        assert np.abs(w1 - w2).max() <= 1e-10 * np.abs(w2).max()


def test_inv_sqrt_errors():
    with pytest.raises(NonSymmetric):
        inv_sqrt_spd(np.array([[1.0, 2.0], [0.0, 1.0]]))
    singular = np.diag([1.0, 0.0])
    with pytest.raises(SingularCovariance):
        inv_sqrt_spd(singular, shrinkage=0.0)
    # shrinkage repairs the singular case
    w = inv_sqrt_spd(singular, shrinkage=0.1)
    reg = 0.9 * singular + 0.1 * np.trace(singular) / 2 * np.eye(2)
    assert np.linalg.norm(w.w @ reg @ w.w - np.eye(2)) <= 1e-8


def test_align_identity_inputs(rng):
    # trials already whitened: alignment is (numerically) the identity
    trials = [make_trial("s", c=3, t=200, seed=i) for i in range(30)]
    aligned, _ = align_subject(trials)
    re_aligned, wh = align_subject(aligned)
    assert np.abs(wh.w - np.eye(3)).max() < 1e-3
    for a, b in zip(re_aligned, aligned):
        denom = max(np.abs(b.data).max(), 1e-12)
        assert np.abs(a.data - b.data).max() / denom <= 1e-6


def test_single_full_rank_trial(rng):
    x = rng.standard_normal((4, 4))
    tr = Trial("s", [f"c{i}" for i in range(4)], x.astype(np.float32), 10.0, 0, 0)
    aligned, _ = align_subject([tr])
    y = aligned[0].data.astype(np.float64)
    assert np.linalg.norm(y @ y.T - np.eye(4)) <= 1e-6


def test_post_alignment_identity(rng):
    for c, n in ((2, 5), (22, 50)):
        trials = [make_trial("s", c=c, t=64, seed=i, scale=25.0) for i in range(n)]
        aligned, _ = align_subject(trials)
        cov = mean_covariance(aligned)
        assert np.linalg.norm(cov.sigma - np.eye(c)) <= 1e-6 * c


def test_labels_and_ids_unchanged():
    trials = [make_trial("s", label=i % 3, index=i, seed=i) for i in range(6)]
    aligned, _ = align_subject(trials)
    assert [t.label for t in aligned] == [t.label for t in trials]
    assert [t.trial_index for t in aligned] == [t.trial_index for t in trials]
    assert all(t.subject_id == "s" for t in aligned)


def test_align_all_groups_by_subject():
    trials = [make_trial("a", seed=1), make_trial("b", seed=2), make_trial("a", seed=3, index=1)]
    aligned, whiteners = align_all(trials)
    assert set(whiteners) == {"a", "b"}
    assert [t.subject_id for t in aligned] == ["a", "b", "a"]
    # per-subject whitening matches aligning each subject separately
    solo, _ = align_subject([trials[1]])
    assert np.array_equal(aligned[1].data, solo[0].data)


def test_center_option_changes_result():
    trials = [make_trial("s", seed=i) for i in range(4)]
    # add a DC offset that centering should remove
    for tr in trials:
        tr.data += 5.0
    plain, _ = align_subject(trials, center=False)
    centered, _ = align_subject(trials, center=True)
    assert not np.allclose(plain[0].data, centered[0].data)
    assert abs(float(centered[0].data.mean(axis=1)[0])) < 1e-4


def test_whiten_trials_applies_matrix(rng):
    trials = [make_trial("s", c=2, t=8, seed=3)]
    cov = mean_covariance(trials)
    wh = inv_sqrt_spd(cov.sigma, subject_id="s")
    out = whiten_trials(trials, wh)
    expect = (wh.w @ trials[0].data.astype(np.float64)).astype(np.float32)
    assert np.array_equal(out[0].data, expect)
