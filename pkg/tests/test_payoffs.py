import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from osp_prox.errors import SaddleNotInteriorError
from osp_prox.geometry import BoxSet
from osp_prox.payoffs import (
    PayoffOracle,
    QuadraticPayoff,
    QuadraticSaddle,
    SeparableSaddle,
    ZeroPayoff,
    best_response_x,
    best_response_y,
    combine,
    minimax_value,
    rho_distance,
    value,
)

BOX = BoxSet.interval(-4.0, 4.0)
Q0 = QuadraticSaddle(0.0, 0.0)
coord = st.floats(-4.0, 4.0, allow_nan=False)


class QuarticSaddle(PayoffOracle):
    """Non-quadratic test payoff: only values and gradients are known."""

    def value(self, x, y):
        return 0.25 * x ** 4 + x * y - 0.5 * y * y

    def grad_x(self, x, y):
        return x ** 3 + y

    def grad_y(self, x, y):
        return x - y


def test_value_examples():
    assert value(Q0, 0.0, 0.0) == 0.0
    assert value(Q0, 1.0, 0.0) == 0.5
    assert value(Q0, 1.0, 1.0) == 1.0


def test_best_response_examples():
    assert best_response_x(Q0, 0.0, BOX) == 0.0
    assert best_response_x(Q0, 1.0, BOX) == -1.0
    assert best_response_x(Q0, 10.0, BOX) == -4.0
    assert best_response_y(Q0, 0.0, BOX) == 0.0
    assert best_response_y(Q0, 1.0, BOX) == 1.0
    assert best_response_y(QuadraticSaddle(2.0, 0.0), -4.0, BOX) == -4.0


def test_minimax_examples():
    assert minimax_value(Q0, BOX, BOX) == 0.0
    assert minimax_value(QuadraticSaddle(1.0, -2.0), BOX, BOX) == 0.0
    with pytest.raises(SaddleNotInteriorError):
        minimax_value(QuadraticSaddle(5.0, 0.0), BOX, BOX)


def test_rho_examples():
    assert rho_distance(Q0, Q0, BOX, BOX) == 0.0
    assert rho_distance(QuadraticSaddle(0.1, 0.0), Q0, BOX, BOX) == pytest.approx(0.805, abs=1e-12)
    assert rho_distance(QuadraticSaddle(0.0, 0.1), Q0, BOX, BOX) == pytest.approx(0.805, abs=1e-12)


def test_rho_matches_grid():
    g = np.linspace(-4, 4, 401)
    X, Y = np.meshgrid(g, g, indexing="ij")
    rng = np.random.default_rng(3)
    for _ in range(20):
        a1, b1, a2, b2 = rng.uniform(-4, 4, 4)
        q1, q2 = QuadraticSaddle(a1, b1), QuadraticSaddle(a2, b2)
        grid = np.max(np.abs(q1.value(X, Y) - q2.value(X, Y)))
        assert rho_distance(q1, q2, BOX, BOX) == pytest.approx(grid, abs=1e-10)


def test_rho_general_quadratic_not_below_grid():
    # curved differences peak off the corners; the exact value bounds the grid
    g = np.linspace(-4, 4, 401)
    X, Y = np.meshgrid(g, g, indexing="ij")
    rng = np.random.default_rng(4)
    for _ in range(20):
        c1, c2 = rng.uniform(-2, 2, 6), rng.uniform(-2, 2, 6)
        c1[:2], c2[:2] = np.abs(c1[:2]), np.abs(c2[:2])  # convex-concave members
        q1, q2 = QuadraticPayoff(*c1), QuadraticPayoff(*c2)
        grid = np.max(np.abs(q1.value(X, Y) - q2.value(X, Y)))
        exact = rho_distance(q1, q2, BOX, BOX)
        assert grid - 1e-9 <= exact <= grid + 1e-3


def test_combine_examples():
    w = combine([1.0], [Q0])
    for x, y in [(0.0, 0.0), (1.0, -2.0), (3.0, 3.5)]:
        assert w.value(x, y) == Q0.value(x, y)
        assert w.best_response_x(y, BOX) == Q0.best_response_x(y, BOX)
    w = combine([0.5, 0.5], [QuadraticSaddle(1.0, 0.0), QuadraticSaddle(-1.0, 0.0)])
    assert w.value(0.0, 0.0) == 0.5
    assert w.best_response_x(0.0, BOX) == 0.0


def test_combine_rejects_bad_weights():
    with pytest.raises(ValueError):
        combine([0.7, 0.7], [Q0, Q0])
    with pytest.raises(ValueError):
        combine([1.0], [Q0, Q0])


def test_separable_saddle():
    s = SeparableSaddle(0.5, -0.5)
    assert s.value(0.5, -0.5) == 0.0
    assert s.value(1.5, -0.5) == 1.0
    assert s.best_response_x(3.0, BOX) == 0.5
    assert s.best_response_y(3.0, BOX) == -0.5


def test_zero_payoff():
    z = ZeroPayoff()
    assert z.value(1.0, 2.0) == 0.0
    assert z.rho_distance(Q0, BOX, BOX) == rho_distance(Q0, z, BOX, BOX)
    assert z.minimax_value(BOX, BOX) == 0.0


def test_generic_oracle_best_responses():
    f = QuarticSaddle()
    # x^3 + y = 0 with y = -1 -> x = 1
    assert f.best_response_x(-1.0, BOX) == pytest.approx(1.0, abs=1e-6)
    assert f.best_response_y(2.0, BOX) == pytest.approx(2.0, abs=1e-6)
    assert f.rho_distance(Q0, BOX, BOX) is None


@settings(max_examples=200)
@given(coord, coord, coord, coord)
def test_quadratic_saddle_matches_general_form(a, b, x, y):
    q = QuadraticSaddle(a, b)
    gen = QuadraticPayoff(*q.coef)
    assert gen.value(x, y) == pytest.approx(q.value(x, y), abs=1e-9)
    assert gen.best_response_x(y, BOX) == pytest.approx(q.best_response_x(y, BOX), abs=1e-12)
    assert gen.best_response_y(x, BOX) == pytest.approx(q.best_response_y(x, BOX), abs=1e-12)


@given(coord, coord, coord, coord)
def test_best_responses_are_optimal(a, b, x, y):
    q = QuadraticSaddle(a, b)
    g = np.linspace(-4, 4, 801)
    xb = q.best_response_x(y, BOX)
    yb = q.best_response_y(x, BOX)
    assert q.value(xb, y) <= np.min(q.value(g, y)) + 1e-12
    assert q.value(x, yb) >= np.max(q.value(x, g)) - 1e-12


@given(coord, coord)
def test_saddle_property(a, b):
    q = QuadraticSaddle(a, b)
    g = np.linspace(-4, 4, 81)
    assert np.all(q.value(a, g) <= 1e-12)
    assert np.all(q.value(g, b) >= -1e-12)
