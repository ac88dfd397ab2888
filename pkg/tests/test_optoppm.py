import numpy as np
import pytest

from osp_prox.algorithms import (
    LaggedOptOppm,
    MultiPredictorOptOppm,
    OptOppm,
    PredictorBank,
    loss_vector,
    multi_predictor_round,
)
from osp_prox.environments import Environment
from osp_prox.errors import NegativeDeltaError
from osp_prox.geometry import BoxSet
from osp_prox.invariants import InvariantLog
from osp_prox.payoffs import QuadraticSaddle, ZeroPayoff

BOX = BoxSet.interval(-4.0, 4.0)
Q0 = QuadraticSaddle(0.0, 0.0)
ZERO = ZeroPayoff()
UNIT_EPS = 72.0  # L (D + C1) / epsilon = 8 * 9 / 72 = 1


def test_first_rates():
    alg = OptOppm(BOX, BOX, 0.0, 0.0)
    assert alg.rates() == pytest.approx((720.0, 720.0), rel=1e-15)


def test_zero_predictor_plays_the_anchor():
    alg = OptOppm(BOX, BOX, 1.5, -2.5)
    assert alg.emit(ZERO) == (1.5, -2.5)


def test_emit_is_the_joint_prox_of_the_predictor():
    alg = OptOppm(BOX, BOX, 1.0, 0.0, epsilon=UNIT_EPS)
    assert alg.emit(Q0) == pytest.approx((0.4, 0.2), abs=1e-12)


def test_delta_example():
    alg = OptOppm(BOX, BOX, 1.0, 0.0, epsilon=UNIT_EPS)
    assert alg.emit(ZERO) == (1.0, 0.0)
    diag = alg.observe(Q0)
    assert diag.x_aux_next == pytest.approx(0.5, abs=1e-12)
    assert diag.delta1 == pytest.approx(0.25, abs=1e-12)
    assert alg.delta1_sum == pytest.approx(0.25, abs=1e-12)
    assert alg.rates()[0] == pytest.approx(72.0 / 72.25, rel=1e-12)


def test_perfect_predictor_at_stationary_point():
    alg = OptOppm(BOX, BOX, 1.0, 1.0)
    f = QuadraticSaddle(1.0, 1.0)
    for _ in range(5):
        alg.emit(f)
        diag = alg.observe(f)
        assert diag.delta1 == pytest.approx(0.0, abs=1e-12)
        assert diag.delta2 == pytest.approx(0.0, abs=1e-12)


def test_observe_requires_emit():
    alg = OptOppm(BOX, BOX, 0.0, 0.0)
    with pytest.raises(RuntimeError):
        alg.observe(Q0)


def test_mismatched_predictor_raises_negative_delta():
    alg = OptOppm(BOX, BOX, 1.0, 0.0, epsilon=UNIT_EPS)
    alg.emit(ZERO)  # plays the anchor (1, 0)
    # claim h = f after the fact: delta1 = -1/2 (0.5 - 1)^2 / 1 < 0
    alg._h = Q0
    with pytest.raises(NegativeDeltaError, match="negative-delta"):
        alg.observe(Q0)


def test_per_player_doubling():
    alg = OptOppm(BOX, BOX, 0.0, 0.0)
    alg.emit(ZERO)
    alg.observe(Q0, best_responses=(0.0, 0.0))
    alg.emit(ZERO)
    d = alg.observe(Q0, best_responses=(1.5, 0.2))
    assert d.doubled and alg.C1 == 2.0 and alg.stage1 == 1
    assert alg.C2 == 1.0 and alg.stage2 == 0
    assert alg.delta1_sum == 0.0


def test_predictor_bank_lags():
    bank = PredictorBank([1, 3])
    assert all(isinstance(h, ZeroPayoff) for h in bank.predictions())
    fs = [QuadraticSaddle(k, 0.0) for k in range(4)]
    for f in fs:
        bank.push(f)
    assert bank.predictions() == [fs[3], fs[1]]
    with pytest.raises(ValueError):
        PredictorBank([0])


def test_loss_vector_examples():
    assert loss_vector(Q0, [Q0], 1.0, 0.5, 0.0, 0.5)[0] == 0.0
    L = loss_vector(Q0, [Q0, ZERO], 1.0, 0.5, 0.0, 0.5)
    np.testing.assert_allclose(L, [0.0, 0.875], atol=1e-15)


def test_single_predictor_bank_matches_lagged_optoppm():
    env = Environment("case1")
    a = LaggedOptOppm(BOX, BOX, 0.3, 0.7, lag=4)
    b = MultiPredictorOptOppm(BOX, BOX, 0.3, 0.7, lags=(4,))
    for t in range(1, 300):
        pa, pb = a.emit(), b.emit()
        assert pa == pb
        f = env.next_payoff(t, pa)
        a.observe(f)
        db = b.observe(f)
        np.testing.assert_array_equal(db.weights, [1.0])


def test_zero_bank_gives_zero_predictor():
    alg = MultiPredictorOptOppm(BOX, BOX, 1.0, -1.0)
    assert alg.emit() == (1.0, -1.0)


def test_stationary_stream_freezes_weights():
    f = QuadraticSaddle(1.0, 1.0)
    alg = MultiPredictorOptOppm(BOX, BOX, -2.0, 3.0)
    for _ in range(6):
        multi_predictor_round(alg, f)
    w = alg.weights.copy()
    for _ in range(20):
        d = multi_predictor_round(alg, f)
        np.testing.assert_array_equal(d.losses, [0.0, 0.0, 0.0])
    np.testing.assert_allclose(alg.weights, w, atol=1e-15)


def test_multi_predictor_invariants_and_hedge_feasibility():
    for kind in ("case2", "case3", "case4"):
        log = InvariantLog(strict=True)
        env = Environment(kind)
        alg = MultiPredictorOptOppm(BOX, BOX, 0.1, 0.2, invariants=log)
        for t in range(1, 800):
            x, y = alg.emit()
            d = alg.observe(env.next_payoff(t, (x, y)))
            assert d.delta1 >= -1e-9 and d.delta2 >= -1e-9
            assert abs(d.weights.sum() - 1.0) <= 1e-12
        assert log.total == 0


def test_case3_multi_predictor_learns_the_period():
    # case 3 repeats with period 3 up to a slow drift, so only lag 6 is accurate
    env = Environment("case3")
    alg = MultiPredictorOptOppm(BOX, BOX, 0.0, 0.0)
    for t in range(1, 3000):
        x, y = alg.emit()
        alg.observe(env.next_payoff(t, (x, y)))
    assert int(np.argmax(alg.weights)) == 2
