import numpy as np
import pytest

from eegnext.errors import ShapeMismatch
from eegnext.train.adamw import AdamWState, TrainConfig, adamw_step


def test_config_defaults_and_validation():
    cfg = TrainConfig()
    assert cfg.lr == 1e-4
    assert cfg.weight_decay == 5e-4
    assert cfg.beta1 == 0.9 and cfg.beta2 == 0.999
    assert cfg.eps == 1e-8
    assert cfg.batch_size == 128 and cfg.epochs == 10
    with pytest.raises(ValueError):
        TrainConfig(lr=0.0)
    with pytest.raises(ValueError):
        TrainConfig(beta2=1.0)
    with pytest.raises(ValueError):
        TrainConfig(weight_decay=-0.1)


def test_zero_gradient_no_decay():
    cfg = TrainConfig(lr=1e-3, weight_decay=0.0)
    params = {"p": np.array([1.5, -2.5])}
    state = AdamWState()
    for _ in range(5):
        adamw_step(params, {"p": np.zeros(2)}, state, cfg)
    assert np.array_equal(params["p"], [1.5, -2.5])


def test_zero_gradient_pure_decay_exact():
    cfg = TrainConfig(lr=1e-4, weight_decay=5e-4)
    p0 = np.array([1.2345678901234567, -0.777], dtype=np.float64)
    params = {"p": p0.copy()}
    state = AdamWState()
    # closed form p_t = p_0 (1 - lr*wd)^t, evaluated by repeated
    # multiplication (the fp-associative reading of the power)
    expect = p0.copy()
    factor = 1.0 - cfg.lr * cfg.weight_decay
    for t in range(1, 12):
        adamw_step(params, {"p": np.zeros(2)}, state, cfg)
        expect *= factor
        assert np.array_equal(params["p"], expect), t


def test_first_step_hand_derivation():
    cfg = TrainConfig(lr=1e-4, weight_decay=5e-4)
    p0 = 0.5
    params = {"p": np.array([p0], dtype=np.float64)}
    adamw_step(params, {"p": np.array([1.0])}, AdamWState(), cfg)
    # m_hat = 1, v_hat = 1 at t=1 for g=1
    expect = p0 * (1 - cfg.lr * cfg.weight_decay) - cfg.lr * (1.0 / (1.0 + cfg.eps))
    assert abs(params["p"][0] - expect) <= 1e-12


def test_moments_accumulate():
    cfg = TrainConfig(lr=1e-2, weight_decay=0.0)
    params = {"p": np.array([0.0], dtype=np.float64)}
    state = AdamWState()
    for _ in range(3):
        adamw_step(params, {"p": np.array([1.0])}, state, cfg)
    assert state.step == 3
    assert state.v["p"][0] > 0
    # constant unit gradient: each step moves by ~lr
    assert params["p"][0] == pytest.approx(-3 * cfg.lr, rel=1e-3)


def test_shape_mismatch():
    cfg = TrainConfig()
    with pytest.raises(ShapeMismatch):
        adamw_step({"p": np.zeros(3)}, {"p": np.zeros(4)}, AdamWState(), cfg)


def test_float32_params_supported():
    cfg = TrainConfig(lr=1e-3, weight_decay=0.0)
    params = {"p": np.ones(2, dtype=np.float32)}
    adamw_step(params, {"p": np.ones(2)}, AdamWState(), cfg)
    assert params["p"].dtype == np.float32
    assert np.all(params["p"] < 1.0)
