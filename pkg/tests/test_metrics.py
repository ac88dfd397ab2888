import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from osp_prox.environments import Environment
from osp_prox.geometry import BoxSet
from osp_prox.metrics import MetricsAccumulator, record_round, snapshot
from osp_prox.payoffs import PayoffOracle, QuadraticSaddle

BOX = BoxSet.interval(-4.0, 4.0)
Q0 = QuadraticSaddle(0.0, 0.0)
coord = st.floats(-4.0, 4.0, allow_nan=False)


def test_play_at_saddle_is_free():
    acc = MetricsAccumulator(BOX, BOX)
    inc = record_round(acc, Q0, 0.0, 0.0)
    assert (inc.reg1, inc.reg2, inc.dgap, inc.nereg) == (0.0, 0.0, 0.0, 0.0)


def test_single_round_example():
    acc = MetricsAccumulator(BOX, BOX)
    inc = record_round(acc, Q0, 1.0, 0.0)
    assert (inc.x_br, inc.y_br) == (0.0, 1.0)
    assert (inc.reg1, inc.reg2, inc.dgap, inc.nereg) == (0.5, 0.5, 1.0, 0.5)
    snap = snapshot(acc)
    assert snap.dgap_avg == 1.0 and snap.nereg_avg == 0.5
    assert snap.reg1_avg == 0.5 and snap.reg2_avg == 0.5


def test_zero_snapshot():
    acc = MetricsAccumulator(BOX, BOX)
    for _ in range(3):
        record_round(acc, QuadraticSaddle(1.0, -1.0), 1.0, -1.0)
    s = snapshot(acc)
    assert (s.dgap_avg, s.nereg_avg, s.reg1_avg, s.reg2_avg, s.path, s.vt) == (0, 0, 0, 0, 0, 0)


def test_snapshot_needs_a_round():
    with pytest.raises(ValueError):
        MetricsAccumulator(BOX, BOX).snapshot()


def test_nereg_is_signed_until_snapshot():
    acc = MetricsAccumulator(BOX, BOX)
    record_round(acc, Q0, 1.0, 0.0)   # value +0.5
    record_round(acc, Q0, 0.0, 1.0)   # value -0.5
    assert acc.nereg_signed_sum == 0.0
    assert acc.snapshot().nereg_avg == 0.0
    assert acc.snapshot().dgap_avg == 1.0


def test_cancellation_stream_every_gap_is_one():
    unit = BoxSet.interval(-1.0, 1.0)
    env = Environment("nereg_cancel")
    acc = MetricsAccumulator(unit, unit)
    rng = np.random.default_rng(0)
    for t in range(1, 201):
        x, y = rng.uniform(-1, 1, 2)
        f = env.next_payoff(t, (x, y))
        inc = acc.record_round(f, x, y)
        assert inc.dgap == 1.0
        assert inc.nereg == (1.0 if t % 2 == 0 else -1.0)
        if t % 2 == 0:
            assert acc.snapshot().nereg_avg <= 1.0 / t
            assert acc.snapshot().dgap_avg == 1.0


def test_path_and_variation():
    acc = MetricsAccumulator(BOX, BOX)
    acc.record_round(Q0, 0.0, 0.0)
    inc = acc.record_round(QuadraticSaddle(0.1, 0.0), 0.0, 0.0)
    assert inc.vt == pytest.approx(0.805, abs=1e-12)
    # best responses (0.1, -0.1) after (0, 0)
    assert inc.path == pytest.approx(0.2, abs=1e-15)
    assert acc.snapshot().path == inc.path


def test_generic_payoff_drops_unavailable_columns():
    class Quartic(PayoffOracle):
        def value(self, x, y):
            return 0.25 * x ** 4 + x * y - 0.5 * y * y

        def grad_x(self, x, y):
            return x ** 3 + y

        def grad_y(self, x, y):
            return x - y

    acc = MetricsAccumulator(BOX, BOX)
    acc.record_round(Quartic(), 0.5, 0.5)
    acc.record_round(Quartic(), 0.5, 0.5)
    s = acc.snapshot()
    assert s.vt is None and s.nereg_avg is None
    assert s.dgap_avg > 0


def test_record_prediction():
    acc = MetricsAccumulator(BOX, BOX)
    assert acc.record_prediction(Q0, QuadraticSaddle(0.1, 0.0)) == pytest.approx(0.805)
    assert acc.vprime_sum == pytest.approx(0.805)


@settings(max_examples=100)
@given(st.lists(st.tuples(coord, coord, coord, coord), min_size=1, max_size=40))
def test_gap_identity_and_domination(rounds):
    acc = MetricsAccumulator(BOX, BOX)
    for a, b, x, y in rounds:
        inc = acc.record_round(QuadraticSaddle(a, b), x, y)
        assert inc.dgap >= -1e-12
        assert inc.dgap == pytest.approx(inc.reg1 + inc.reg2, abs=1e-12)
    T = len(rounds)
    assert abs(acc.dgap_sum - (acc.reg1_sum + acc.reg2_sum)) <= 1e-9 * T
    assert abs(acc.nereg_signed_sum) <= acc.dgap_sum + 1e-9 * T
    assert acc.invariants.total == 0


def test_nereg_unavailable_when_saddle_leaves_box():
    acc = MetricsAccumulator(BOX, BOX)
    acc.record_round(QuadraticSaddle(5.0, 0.0), 0.0, 0.0)
    assert acc.snapshot().nereg_avg is None
    assert math.isfinite(acc.snapshot().dgap_avg)
