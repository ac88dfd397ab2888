"""Per-round regularized subproblems.

``solve_joint_prox`` computes the saddle point of::

    f(x, y) + 1/(2 eta) ||x - x_anchor||^2 - 1/(2 gamma) ||y - y_anchor||^2

over ``box_x x box_y``; ``prox_min_step`` / ``prox_max_step`` are the
one-sided versions with the other player frozen.

Scalar quadratic payoffs take an exact path: the 2x2 stationarity system,
then enumeration of the box KKT cases if the unconstrained point is
infeasible. Anything else goes through projected extragradient on the
regularized (hence strongly monotone) operator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import optimize

from .errors import InnerSolveError
from .geometry import BoxSet, Point, norm
from .payoffs import PayoffOracle, golden_section_argmin

RATE_CAP = 1e12
DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 100_000


@dataclass
class ProxProblem:
    payoff: PayoffOracle
    eta: float
    gamma: float
    x_anchor: Point
    y_anchor: Point
    box_x: BoxSet
    box_y: BoxSet

    def __post_init__(self):
        if not (self.eta > 0 and self.gamma > 0):
            raise ValueError(f"prox rates must be positive (eta={self.eta}, gamma={self.gamma})")


@dataclass
class SolveReport:
    x: Point
    y: Point
    residual: float
    iterations: int
    method: str  # "closed-form" or "iterative"
    eta: float
    gamma: float
    capped: bool = False

    @property
    def solution(self):
        return self.x, self.y


def cap_rate(rate: float) -> float:
    return RATE_CAP if rate >= RATE_CAP else rate


def joint_residual(payoff, x, y, eta, gamma, x_anchor, y_anchor, box_x, box_y) -> float:
    """Projected fixed-point gap of the joint prox problem at ``(x, y)``."""
    s = min(eta, gamma, 1.0)
    gx = payoff.grad_x(x, y) + (x - x_anchor) / eta
    gy = payoff.grad_y(x, y) - (y - y_anchor) / gamma
    return norm(x - box_x.project(x - s * gx)) + norm(y - box_y.project(y + s * gy))


def _scalar_problem(p: ProxProblem) -> bool:
    return (
        p.box_x.dim == 1
        and p.box_y.dim == 1
        and not isinstance(p.x_anchor, np.ndarray)
        and not isinstance(p.y_anchor, np.ndarray)
    )


def _quadratic_joint(coef, eta, gamma, xa, ya, box_x, box_y, tol):
    """Exact saddle of the regularized scalar quadratic over the box."""
    P, R, C, u, v, k = coef
    # rows scaled by eta and gamma:
    #   (eta P + 1) x + eta C y = xa - eta u
    #   gamma C x - (gamma R + 1) y = -ya - gamma v
    a11 = eta * P + 1.0
    a12 = eta * C
    b1 = xa - eta * u
    a21 = gamma * C
    a22 = -(gamma * R + 1.0)
    b2 = -ya - gamma * v
    det = a11 * a22 - a12 * a21
    x = (b1 * a22 - a12 * b2) / det
    y = (a11 * b2 - a21 * b1) / det
    xl, xh, yl, yh = box_x._lo, box_x._hi, box_y._lo, box_y._hi
    if xl <= x <= xh and yl <= y <= yh:
        return x, y

    best = None
    best_viol = math.inf
    for sx in ("free", "lo", "hi"):
        for sy in ("free", "lo", "hi"):
            if sx == "free" and sy == "free":
                continue
            if sx != "free" and sy != "free":
                cx = xl if sx == "lo" else xh
                cy = yl if sy == "lo" else yh
            elif sx != "free":
                cx = xl if sx == "lo" else xh
                cy = (b2 - a21 * cx) / a22
            else:
                cy = yl if sy == "lo" else yh
                cx = (b1 - a12 * cy) / a11
            # derivative of the composite in x (minimized) and y (maximized)
            gx = a11 * cx + a12 * cy - b1
            gy = a21 * cx + a22 * cy - b2
            viol = 0.0
            viol = max(viol, xl - cx, cx - xh, yl - cy, cy - yh)
            if sx == "lo":
                viol = max(viol, -gx)
            elif sx == "hi":
                viol = max(viol, gx)
            if sy == "lo":
                viol = max(viol, gy)
            elif sy == "hi":
                viol = max(viol, -gy)
            if viol < best_viol:
                best, best_viol = (cx, cy), viol
    cx, cy = best
    return box_x.project(cx), box_y.project(cy)


def _extragradient(p: ProxProblem, eta, gamma, tol, max_iter, start=None):
    box_x, box_y = p.box_x, p.box_y
    f = p.payoff
    scalar = _scalar_problem(p)

    def unpack(z):
        if scalar:
            return float(z[0]), float(z[1])
        return z[: box_x.dim], z[box_x.dim:]

    def pack(x, y):
        return np.concatenate([np.atleast_1d(np.asarray(x, float)), np.atleast_1d(np.asarray(y, float))])

    lo = np.concatenate([box_x.lower, box_y.lower])
    hi = np.concatenate([box_x.upper, box_y.upper])
    xa = np.atleast_1d(np.asarray(p.x_anchor, float))
    ya = np.atleast_1d(np.asarray(p.y_anchor, float))
    anchor = np.concatenate([xa, ya])
    inv_rate = np.concatenate([np.full(box_x.dim, 1.0 / eta), np.full(box_y.dim, 1.0 / gamma)])

    def F(z):
        x, y = unpack(z)
        g = pack(f.grad_x(x, y), -np.asarray(f.grad_y(x, y), float))
        return g + inv_rate * (z - anchor)

    def proj(z):
        return np.minimum(np.maximum(z, lo), hi)

    z = proj(anchor) if start is None else proj(pack(*start))
    # curvature probe along a fixed direction; backtracking corrects it
    h = 1e-3 * max(1.0, box_x.diameter + box_y.diameter)
    probe_dir = np.ones_like(z) * h
    curv = np.linalg.norm(F(z + probe_dir) - F(z) - inv_rate * probe_dir) / np.linalg.norm(probe_dir)
    steps = 1.0 / (inv_rate + max(curv, 1e-12))
    nu = 0.9

    res = math.inf
    for it in range(1, max_iter + 1):
        Fz = F(z)
        while True:
            zt = proj(z - steps * Fz)
            Ft = F(zt)
            lhs = np.sum(steps * (Ft - Fz) ** 2)
            rhs = nu * nu * np.sum((zt - z) ** 2 / steps)
            if lhs <= rhs or not np.any(zt != z):
                break
            steps = steps * 0.5
        z = proj(z - steps * Ft)
        x, y = unpack(z)
        res = joint_residual(f, x, y, eta, gamma, p.x_anchor, p.y_anchor, box_x, box_y)
        if res <= tol:
            return x, y, res, it
    raise InnerSolveError(
        f"inner-solve-diverged: residual {res:.3e} > tol {tol:.1e} after {max_iter} iterations"
    )


def solve_joint_prox(
    p: ProxProblem,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    method: Optional[str] = None,
) -> SolveReport:
    """Solve the regularized min-max step.

    Parameters
    ----------
    p : ProxProblem
    tol : float
        Bound on the projected fixed-point residual.
    max_iter : int
        Iteration cap for the extragradient path.
    method : {None, "closed-form", "iterative"}
        Force a path. ``None`` picks closed form whenever the payoff is a
        scalar quadratic.

    Raises
    ------
    InnerSolveError
        If the iterative path cannot reach ``tol``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    eta, gamma = cap_rate(p.eta), cap_rate(p.gamma)
    capped = eta != p.eta or gamma != p.gamma
    coef = p.payoff.quadratic_coefficients() if _scalar_problem(p) else None
    if method == "closed-form" and coef is None:
        raise ValueError("closed-form path needs a scalar quadratic payoff")

    if coef is not None and method != "iterative":
        x, y = _quadratic_joint(coef, eta, gamma, p.x_anchor, p.y_anchor, p.box_x, p.box_y, tol)
        res = joint_residual(p.payoff, x, y, eta, gamma, p.x_anchor, p.y_anchor, p.box_x, p.box_y)
        if res <= tol:
            return SolveReport(x, y, res, 0, "closed-form", eta, gamma, capped)
        # rounding pushed the exact point past tol; polish it
        x, y, res, it = _extragradient(p, eta, gamma, tol, max_iter, start=(x, y))
        return SolveReport(x, y, res, it, "iterative", eta, gamma, capped)

    x, y, res, it = _extragradient(p, eta, gamma, tol, max_iter)
    return SolveReport(x, y, res, it, "iterative", eta, gamma, capped)


def _prox_generic(objective, grad, anchor, box: BoxSet, tol):
    if box.dim == 1 and not isinstance(anchor, np.ndarray):
        return golden_section_argmin(objective, box._lo, box._hi, tol=tol)
    x0 = box.project(np.asarray(anchor, float))
    res = optimize.minimize(
        objective,
        x0=x0,
        jac=grad,
        method="L-BFGS-B",
        bounds=list(zip(box.lower, box.upper)),
        options={"ftol": 1e-16, "gtol": tol, "maxiter": DEFAULT_MAX_ITER},
    )
    x = box.project(res.x)
    pg = np.linalg.norm(x - box.project(x - grad(x)))
    if pg > max(tol, 1e3 * tol * (1 + np.linalg.norm(x))):
        raise InnerSolveError(f"inner-solve-diverged: projected gradient {pg:.3e} above tol {tol:.1e}")
    return x


def prox_min_step(payoff: PayoffOracle, y_fixed, eta: float, anchor, box: BoxSet, tol: float = DEFAULT_TOL):
    """argmin over ``box`` of ``eta f(x, y_fixed) + 1/2 ||x - anchor||^2``."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    eta = cap_rate(eta)
    coef = payoff.quadratic_coefficients()
    if coef is not None and box.dim == 1 and not isinstance(anchor, np.ndarray):
        P, R, C, u, v, k = coef
        return box.project((anchor - eta * (C * y_fixed + u)) / (eta * P + 1.0))

    def obj(x):
        d = x - anchor
        return eta * payoff.value(x, y_fixed) + 0.5 * float(np.dot(d, d))

    def grad(x):
        return eta * np.asarray(payoff.grad_x(x, y_fixed), float) + (x - anchor)

    return _prox_generic(obj, grad, anchor, box, tol)


def prox_max_step(payoff: PayoffOracle, x_fixed, gamma: float, anchor, box: BoxSet, tol: float = DEFAULT_TOL):
    """argmax over ``box`` of ``gamma f(x_fixed, y) - 1/2 ||y - anchor||^2``."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    gamma = cap_rate(gamma)
    coef = payoff.quadratic_coefficients()
    if coef is not None and box.dim == 1 and not isinstance(anchor, np.ndarray):
        P, R, C, u, v, k = coef
        return box.project((anchor + gamma * (C * x_fixed + v)) / (gamma * R + 1.0))

    def obj(y):
        d = y - anchor
        return -gamma * payoff.value(x_fixed, y) + 0.5 * float(np.dot(d, d))

    def grad(y):
        return -gamma * np.asarray(payoff.grad_y(x_fixed, y), float) + (y - anchor)

    return _prox_generic(obj, grad, anchor, box, tol)
