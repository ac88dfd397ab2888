import numpy as np
import pytest

from osp_prox.algorithms import Oppm
from osp_prox.environments import Environment
from osp_prox.errors import InvariantViolation
from osp_prox.geometry import BoxSet
from osp_prox.invariants import TELESCOPING, InvariantLog
from osp_prox.payoffs import QuadraticSaddle

BOX = BoxSet.interval(-4.0, 4.0)
Q0 = QuadraticSaddle(0.0, 0.0)


def test_emit_is_a_read():
    alg = Oppm(BOX, BOX, 0.3, -1.2)
    assert alg.emit() == (0.3, -1.2)
    assert alg.emit() == alg.emit()


def test_first_rate():
    # L = D = 8, C = 1, epsilon = 0.1, empty Delta sum
    alg = Oppm(BOX, BOX, 0.0, 0.0)
    assert alg.current_rate() == pytest.approx(1360.0, rel=1e-15)
    diag = alg.observe(Q0)
    assert diag.eta == diag.gamma == pytest.approx(1360.0, rel=1e-15)


def test_one_step_follows_the_joint_prox():
    # epsilon = 136 makes eta = 8 * 17 / 136 = 1
    alg = Oppm(BOX, BOX, 1.0, 0.0, epsilon=136.0)
    diag = alg.observe(Q0)
    assert diag.eta == 1.0
    assert alg.emit() == pytest.approx((0.4, 0.2), abs=1e-12)


def test_delta_telescoping_example():
    alg = Oppm(BOX, BOX, 0.0, 0.0)
    deltas = [alg._update_delta(s) for s in (1.0, 0.5, 2.0)]
    assert deltas == [1.0, 0.0, 1.0]
    assert alg.delta_sum == 2.0 == alg.sigma_max


def test_doubling_on_path_length():
    alg = Oppm(BOX, BOX, 0.0, 0.0)
    d1 = alg.observe(Q0, best_responses=(0.0, 0.0))
    assert not d1.doubled and alg.C == 1.0
    d2 = alg.observe(Q0, best_responses=(1.2, 0.0))
    assert d2.doubled and alg.C == 2.0 and alg.stage == 1
    # a jump of 5 more needs two doublings at once
    d3 = alg.observe(Q0, best_responses=(-3.8, 0.0))
    assert d3.doubled and alg.C == 8.0 and alg.stage == 3


def test_stage_reset_keeps_iterate_and_clears_sums():
    alg = Oppm(BOX, BOX, 2.0, -1.0)
    env = Environment("case2")
    for t in range(1, 30):
        x, y = alg.emit()
        f = env.next_payoff(t, (x, y))
        diag = alg.observe(f)
        if diag.doubled:
            assert alg.delta_sum == 0.0 and alg.sigma1_sum == 0.0 and alg.sigma2_sum == 0.0
            # the new stage starts from the prox step of the current iterate, not a restart
            fresh = Oppm(BOX, BOX, x, y, C=alg.C)
            fresh.observe(f)
            assert alg.emit() == pytest.approx(fresh.emit(), abs=1e-12)
    assert alg.stage > 0


def test_stationary_start_at_saddle_stays():
    alg = Oppm(BOX, BOX, 1.0, 1.0)
    f = QuadraticSaddle(1.0, 1.0)
    for _ in range(50):
        alg.observe(f)
        assert alg.emit() == (1.0, 1.0)


def test_invariants_clean_on_all_cases():
    for kind in ("case1", "case2", "case3", "case4"):
        log = InvariantLog(strict=True)
        env = Environment(kind)
        alg = Oppm(BOX, BOX, 0.5, -0.5, invariants=log)
        last = None
        for t in range(1, 1500):
            x, y = alg.emit()
            diag = alg.observe(env.next_payoff(t, (x, y)))
            if last is not None and diag.stage_x == last.stage_x:
                assert diag.eta <= last.eta
            last = diag
        assert log.total == 0


def test_broken_delta_update_is_caught():
    class Broken(Oppm):
        def _update_delta(self, sigma):
            return 0.0

    log = InvariantLog()
    env = Environment("case1")
    alg = Broken(BOX, BOX, 3.0, -3.0, invariants=log)
    for t in range(1, 200):
        x, y = alg.emit()
        alg.observe(env.next_payoff(t, (x, y)))
    assert log.counts[TELESCOPING] > 0
    strict = Broken(BOX, BOX, 3.0, -3.0, invariants=InvariantLog(strict=True))
    with pytest.raises(InvariantViolation, match="telescoping"):
        for t in range(1, 200):
            x, y = strict.emit()
            strict.observe(env.next_payoff(t, (x, y)))


def test_two_dimensional_boxes():
    from osp_prox.payoffs import PayoffOracle

    class Bilinear2D(PayoffOracle):
        def value(self, x, y):
            return 0.5 * x @ x - 0.5 * y @ y + x @ y

        def grad_x(self, x, y):
            return x + y

        def grad_y(self, x, y):
            return x - y

        def grad_bound_x(self, bx, by):
            return float(np.linalg.norm(bx.upper) + np.linalg.norm(by.upper))

        def grad_bound_y(self, bx, by):
            return self.grad_bound_x(bx, by)

    sq = BoxSet.cube(-1.0, 1.0, 2)
    alg = Oppm(sq, sq, np.array([0.5, -0.5]), np.array([0.2, 0.1]), epsilon=50.0)
    f = Bilinear2D()
    for _ in range(20):
        alg.observe(f)
    x, y = alg.emit()
    assert np.linalg.norm(x) < 1e-3 and np.linalg.norm(y) < 1e-3
    assert alg.invariants.total == 0


def test_rejects_bad_parameters():
    with pytest.raises(ValueError):
        Oppm(BOX, BOX, 0.0, 0.0, epsilon=0.0)
    with pytest.raises(ValueError):
        Oppm(BOX, BOX, 0.0, 0.0, C=-1.0)
