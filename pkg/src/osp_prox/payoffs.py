"""Convex-concave payoff oracles.

Every oracle exposes values, partial gradients, best responses over boxes,
the minimax value and gradient bounds. Scalar quadratics additionally
report their coefficients ``(P, R, C, u, v, k)`` of::

    f(x, y) = P/2 x^2 - R/2 y^2 + C x y + u x + v y + k

which lets the inner solvers take closed-form paths and lets ``rho`` be
computed exactly.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np
from scipy import optimize

from .errors import SaddleNotInteriorError
from .geometry import BoxSet, Point

Coefficients = tuple  # (P, R, C, u, v, k)


def golden_section_argmin(fn, lo: float, hi: float, tol: float = 1e-10, max_iter: int = 200) -> float:
    """Minimize a unimodal scalar function on ``[lo, hi]``.

    Bounded Brent search (golden-section steps with parabolic
    acceleration). The endpoints are compared explicitly since the search
    never evaluates them.
    """
    if hi - lo <= 0.0:
        return lo
    res = optimize.minimize_scalar(
        fn, bounds=(lo, hi), method="bounded", options={"xatol": tol, "maxiter": max_iter}
    )
    best = float(res.x)
    fbest = fn(best)
    for cand in (lo, hi):
        fc = fn(cand)
        if fc < fbest:
            best, fbest = cand, fc
    return best


class PayoffOracle:
    """Interface for a convex-concave payoff ``f(x, y)``.

    Subclasses must implement :meth:`value`, :meth:`grad_x` and
    :meth:`grad_y`. The remaining methods have generic numeric defaults;
    closed forms should override them.
    """

    def value(self, x: Point, y: Point) -> float:
        raise NotImplementedError

    def grad_x(self, x: Point, y: Point) -> Point:
        raise NotImplementedError

    def grad_y(self, x: Point, y: Point) -> Point:
        raise NotImplementedError

    def quadratic_coefficients(self) -> Optional[Coefficients]:
        return None

    def best_response_x(self, y: Point, box: BoxSet) -> Point:
        """argmin over ``box`` of ``f(., y)``."""
        if box.dim == 1:
            return golden_section_argmin(lambda x: self.value(x, y), box._lo, box._hi)
        res = optimize.minimize(
            lambda x: self.value(x, y),
            x0=box.project(np.zeros(box.dim)),
            jac=lambda x: np.asarray(self.grad_x(x, y), float),
            method="L-BFGS-B",
            bounds=list(zip(box.lower, box.upper)),
            options={"ftol": 1e-15, "gtol": 1e-12, "maxiter": 10_000},
        )
        return box.project(res.x)

    def best_response_y(self, x: Point, box: BoxSet) -> Point:
        """argmax over ``box`` of ``f(x, .)``."""
        if box.dim == 1:
            return golden_section_argmin(lambda y: -self.value(x, y), box._lo, box._hi)
        res = optimize.minimize(
            lambda y: -self.value(x, y),
            x0=box.project(np.zeros(box.dim)),
            jac=lambda y: -np.asarray(self.grad_y(x, y), float),
            method="L-BFGS-B",
            bounds=list(zip(box.lower, box.upper)),
            options={"ftol": 1e-15, "gtol": 1e-12, "maxiter": 10_000},
        )
        return box.project(res.x)

    def minimax_value(self, box_x: BoxSet, box_y: BoxSet) -> float:
        raise NotImplementedError(f"{type(self).__name__} has no minimax oracle")

    def grad_bound_x(self, box_x: BoxSet, box_y: BoxSet) -> float:
        raise NotImplementedError(f"{type(self).__name__} has no gradient bound")

    def grad_bound_y(self, box_x: BoxSet, box_y: BoxSet) -> float:
        raise NotImplementedError(f"{type(self).__name__} has no gradient bound")

    def rho_distance(self, other: "PayoffOracle", box_x: BoxSet, box_y: BoxSet) -> Optional[float]:
        """Sup-norm distance to ``other`` over the boxes, or None if unavailable."""
        c1 = self.quadratic_coefficients()
        c2 = other.quadratic_coefficients()
        if c1 is None or c2 is None or box_x.dim != 1 or box_y.dim != 1:
            return None
        diff = tuple(a - b for a, b in zip(c1, c2))
        if diff[0] == diff[1] == diff[2] == 0.0:
            # equal curvature, as for two shifted saddles: the difference is affine
            return _affine_sup_abs(diff[3], diff[4], diff[5], box_x, box_y)
        return quadratic_sup_abs(diff, box_x, box_y)


# -- coefficient helpers ------------------------------------------------------


def quadratic_value(c: Coefficients, x: float, y: float) -> float:
    P, R, C, u, v, k = c
    return 0.5 * P * x * x - 0.5 * R * y * y + C * x * y + u * x + v * y + k


def _argmin_1d(curv: float, slope: float, lo: float, hi: float) -> float:
    # minimizer of curv/2 t^2 + slope t on [lo, hi], curv >= 0
    if curv > 0.0:
        t = -slope / curv
    elif slope > 0.0:
        return lo
    elif slope < 0.0:
        return hi
    else:
        t = 0.0
    return lo if t < lo else (hi if t > hi else t)


def quadratic_best_response_x(c: Coefficients, y: float, box: BoxSet) -> float:
    P, R, C, u, v, k = c
    return _argmin_1d(P, C * y + u, box._lo, box._hi)


def quadratic_best_response_y(c: Coefficients, x: float, box: BoxSet) -> float:
    P, R, C, u, v, k = c
    return _argmin_1d(R, -(C * x + v), box._lo, box._hi)


def quadratic_saddle_point(c: Coefficients):
    """Unconstrained stationary point, or None when the system is singular."""
    P, R, C, u, v, k = c
    det = -P * R - C * C
    if det == 0.0:
        return None
    x = (u * R + C * v) / det
    y = (C * u - P * v) / det
    return x, y


def quadratic_minimax_value(c: Coefficients, box_x: BoxSet, box_y: BoxSet) -> float:
    P, R, C, u, v, k = c
    if P == R == C == u == v == 0.0:
        return k
    sp = quadratic_saddle_point(c)
    if sp is None or not (box_x.contains(sp[0]) and box_y.contains(sp[1])):
        raise SaddleNotInteriorError("saddle-not-interior: closed-form minimax value needs an interior saddle")
    return quadratic_value(c, *sp)


def quadratic_sup_abs(c: Coefficients, box_x: BoxSet, box_y: BoxSet) -> float:
    """Exact max of |q| over a rectangle for a quadratic q.

    Checks the corners, the stationary point of q restricted to each edge
    and the interior stationary point.
    """
    P, R, C, u, v, k = c
    xl, xh, yl, yh = box_x._lo, box_x._hi, box_y._lo, box_y._hi
    cands = [(xl, yl), (xl, yh), (xh, yl), (xh, yh)]
    if P != 0.0:
        for y in (yl, yh):
            x = -(C * y + u) / P
            if xl <= x <= xh:
                cands.append((x, y))
    if R != 0.0:
        for x in (xl, xh):
            y = (C * x + v) / R
            if yl <= y <= yh:
                cands.append((x, y))
    sp = quadratic_saddle_point(c)
    if sp is not None and xl <= sp[0] <= xh and yl <= sp[1] <= yh:
        cands.append(sp)
    return max(abs(quadratic_value(c, x, y)) for x, y in cands)


def _affine_sup_abs(a: float, b: float, c0: float, box_x: BoxSet, box_y: BoxSet) -> float:
    # |affine| peaks at a corner: the largest of |c0 + extreme a x + extreme b y|
    ax = (a * box_x._lo, a * box_x._hi)
    by = (b * box_y._lo, b * box_y._hi)
    hi = c0 + max(ax) + max(by)
    lo = c0 + min(ax) + min(by)
    return max(hi, -lo)


# -- concrete oracles ---------------------------------------------------------


class QuadraticPayoff(PayoffOracle):
    """General scalar quadratic ``P/2 x^2 - R/2 y^2 + C x y + u x + v y + k``.

    Convex-concave when ``P >= 0`` and ``R >= 0``.
    """

    __slots__ = ("coef", "_gb")

    def __init__(self, P, R, C, u=0.0, v=0.0, k=0.0):
        if P < 0 or R < 0:
            raise ValueError("QuadraticPayoff needs P >= 0 and R >= 0 to be convex-concave")
        self.coef = (float(P), float(R), float(C), float(u), float(v), float(k))
        self._gb = None

    def quadratic_coefficients(self):
        return self.coef

    def value(self, x, y):
        return quadratic_value(self.coef, x, y)

    def grad_x(self, x, y):
        P, R, C, u, v, k = self.coef
        return P * x + C * y + u

    def grad_y(self, x, y):
        P, R, C, u, v, k = self.coef
        return C * x - R * y + v

    def best_response_x(self, y, box):
        return quadratic_best_response_x(self.coef, y, box)

    def best_response_y(self, x, box):
        return quadratic_best_response_y(self.coef, x, box)

    def minimax_value(self, box_x, box_y):
        return quadratic_minimax_value(self.coef, box_x, box_y)

    def _grad_bounds(self, box_x, box_y):
        # one-entry memo: a payoff is queried repeatedly against the same boxes
        gb = self._gb
        if gb is not None and gb[0] is box_x and gb[1] is box_y:
            return gb[2]
        P, R, C, u, v, k = self.coef
        b = (_affine_sup_abs(P, C, u, box_x, box_y), _affine_sup_abs(C, -R, v, box_x, box_y))
        self._gb = (box_x, box_y, b)
        return b

    def grad_bound_x(self, box_x, box_y):
        return self._grad_bounds(box_x, box_y)[0]

    def grad_bound_y(self, box_x, box_y):
        return self._grad_bounds(box_x, box_y)[1]

    def __repr__(self):
        return "QuadraticPayoff(P={}, R={}, C={}, u={}, v={}, k={})".format(*self.coef)


class QuadraticSaddle(QuadraticPayoff):
    """``1/2 (x-a)^2 - 1/2 (y-b)^2 + (x-a)(y-b)``, saddle at ``(a, b)``."""

    __slots__ = ("a", "b")

    def __init__(self, a: float, b: float):
        a = float(a)
        b = float(b)
        self.a = a
        self.b = b
        self.coef = (1.0, 1.0, 1.0, -a - b, b - a, 0.5 * a * a - 0.5 * b * b + a * b)
        self._gb = None

    def value(self, x, y):
        dx = x - self.a
        dy = y - self.b
        return 0.5 * dx * dx - 0.5 * dy * dy + dx * dy

    def grad_x(self, x, y):
        return (x - self.a) + (y - self.b)

    def grad_y(self, x, y):
        return (x - self.a) - (y - self.b)

    def best_response_x(self, y, box):
        return box.project(self.a - (y - self.b))

    def best_response_y(self, x, box):
        return box.project(self.b + (x - self.a))

    def minimax_value(self, box_x, box_y):
        if not (box_x.contains(self.a) and box_y.contains(self.b)):
            raise SaddleNotInteriorError(
                f"saddle-not-interior: ({self.a}, {self.b}) lies outside the boxes"
            )
        return 0.0

    def __eq__(self, other):
        return type(other) is type(self) and other.a == self.a and other.b == self.b

    def __hash__(self):
        return hash((type(self).__name__, self.a, self.b))

    def __repr__(self):
        return f"{type(self).__name__}(a={self.a!r}, b={self.b!r})"


class SeparableSaddle(QuadraticSaddle):
    """``(x-a)^2 - (y-b)^2``: unit coefficients, no cross term.

    Used by the cancellation adversary, where best responses are the saddle
    coordinates themselves.
    """

    __slots__ = ()

    def __init__(self, a: float, b: float):
        a = float(a)
        b = float(b)
        self.a = a
        self.b = b
        self.coef = (2.0, 2.0, 0.0, -2.0 * a, 2.0 * b, a * a - b * b)
        self._gb = None

    def value(self, x, y):
        dx = x - self.a
        dy = y - self.b
        return dx * dx - dy * dy

    def grad_x(self, x, y):
        return 2.0 * (x - self.a)

    def grad_y(self, x, y):
        return -2.0 * (y - self.b)

    def best_response_x(self, y, box):
        return box.project(self.a)

    def best_response_y(self, x, box):
        return box.project(self.b)


class ZeroPayoff(PayoffOracle):
    """The identically-zero payoff; predictor placeholder before history exists."""

    def value(self, x, y):
        return 0.0

    def grad_x(self, x, y):
        return np.zeros_like(x, dtype=float) if isinstance(x, np.ndarray) else 0.0

    def grad_y(self, x, y):
        return np.zeros_like(y, dtype=float) if isinstance(y, np.ndarray) else 0.0

    def quadratic_coefficients(self):
        return (0.0, 0.0, 0.0, 0.0, 0.0, 0.0)

    def best_response_x(self, y, box):
        return box.project(0.0 if box.dim == 1 else np.zeros(box.dim))

    def best_response_y(self, x, box):
        return box.project(0.0 if box.dim == 1 else np.zeros(box.dim))

    def minimax_value(self, box_x, box_y):
        return 0.0

    def grad_bound_x(self, box_x, box_y):
        return 0.0

    def grad_bound_y(self, box_x, box_y):
        return 0.0

    def rho_distance(self, other, box_x, box_y):
        if isinstance(other, ZeroPayoff):
            return 0.0
        return super().rho_distance(other, box_x, box_y)

    def __eq__(self, other):
        return isinstance(other, ZeroPayoff)

    def __hash__(self):
        return hash("ZeroPayoff")

    def __repr__(self):
        return "ZeroPayoff()"


class WeightedPayoff(PayoffOracle):
    """Convex combination ``sum_k w_k f_k`` of member oracles.

    Values and gradients are evaluated member by member. For all-quadratic
    members the combined coefficients are also exposed so the closed-form
    solvers apply.
    """

    def __init__(self, weights: Sequence[float], members: Sequence[PayoffOracle]):
        self.weights = tuple(float(w) for w in weights)
        self.members = tuple(members)
        coefs = [m.quadratic_coefficients() for m in self.members]
        if all(c is not None for c in coefs):
            ws = self.weights
            self._coef = tuple(sum(w * ci for w, ci in zip(ws, col)) for col in zip(*coefs))
        else:
            self._coef = None

    def quadratic_coefficients(self):
        return self._coef

    def value(self, x, y):
        s = 0.0
        for w, m in zip(self.weights, self.members):
            s += w * m.value(x, y)
        return s

    def grad_x(self, x, y):
        s = 0.0
        for w, m in zip(self.weights, self.members):
            s = s + w * m.grad_x(x, y)
        return s

    def grad_y(self, x, y):
        s = 0.0
        for w, m in zip(self.weights, self.members):
            s = s + w * m.grad_y(x, y)
        return s

    def best_response_x(self, y, box):
        if self._coef is not None and box.dim == 1:
            return quadratic_best_response_x(self._coef, y, box)
        return super().best_response_x(y, box)

    def best_response_y(self, x, box):
        if self._coef is not None and box.dim == 1:
            return quadratic_best_response_y(self._coef, x, box)
        return super().best_response_y(x, box)

    def minimax_value(self, box_x, box_y):
        if self._coef is None:
            return super().minimax_value(box_x, box_y)
        return quadratic_minimax_value(self._coef, box_x, box_y)

    def grad_bound_x(self, box_x, box_y):
        return sum(w * m.grad_bound_x(box_x, box_y) for w, m in zip(self.weights, self.members))

    def grad_bound_y(self, box_x, box_y):
        return sum(w * m.grad_bound_y(box_x, box_y) for w, m in zip(self.weights, self.members))

    def __repr__(self):
        return f"WeightedPayoff(weights={list(self.weights)}, members={list(self.members)})"


def combine(weights: Sequence[float], members: Sequence[PayoffOracle]) -> WeightedPayoff:
    """Build the weighted predictor ``sum_k w_k h_k`` with validated weights."""
    weights = [float(w) for w in weights]
    members = list(members)
    if len(members) == 0 or len(weights) != len(members):
        raise ValueError(f"need one weight per member (got {len(weights)} weights, {len(members)} members)")
    if min(weights) < -1e-9 or abs(math.fsum(weights) - 1.0) > 1e-9:
        raise ValueError("weights must lie on the probability simplex")
    return WeightedPayoff(weights, members)


def value(q: PayoffOracle, x, y) -> float:
    return q.value(x, y)


def best_response_x(q: PayoffOracle, y, box: BoxSet):
    return q.best_response_x(y, box)


def best_response_y(q: PayoffOracle, x, box: BoxSet):
    return q.best_response_y(x, box)


def minimax_value(q: PayoffOracle, box_x: BoxSet, box_y: BoxSet) -> float:
    return q.minimax_value(box_x, box_y)


def rho_distance(q1: PayoffOracle, q2: PayoffOracle, box_x: BoxSet, box_y: BoxSet) -> Optional[float]:
    return q1.rho_distance(q2, box_x, box_y)
