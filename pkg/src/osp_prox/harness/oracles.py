"""Slow, independent reference solvers used by ``verify`` and the tests."""

from __future__ import annotations

import numpy as np

from ..geometry import BoxSet
from ..payoffs import QuadraticPayoff


def clipped_projection_bisection(W, alpha: float, iters: int = 200) -> np.ndarray:
    """Clipped-simplex KL projection by bisection on the scale factor.

    The stationarity conditions give ``w_i = max(alpha / d, c * W_i)`` for
    the one ``c`` that makes the total 1; the total is monotone in ``c``.
    """
    W = np.asarray(W, dtype=float)
    d = W.size
    floor = alpha / d
    lo, hi = 0.0, 1.0
    while np.maximum(floor, hi * W).sum() < 1.0:
        hi *= 2.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if np.maximum(floor, mid * W).sum() < 1.0:
            lo = mid
        else:
            hi = mid
    return np.maximum(floor, hi * W)


def joint_prox_grid(payoff: QuadraticPayoff, eta: float, gamma: float, x_anchor: float,
                    y_anchor: float, box_x: BoxSet, box_y: BoxSet, step: float = 1e-3,
                    chunk: int = 256):
    """Brute-force argmin over x of max over y of the regularized payoff on a grid.

    Every grid pair is evaluated; rows of x are processed in chunks to bound
    memory. Returns the grid minimizer ``x`` and the grid maximizer ``y`` at
    that ``x``.
    """
    P, R, C, u, v, k = payoff.quadratic_coefficients()
    xs = np.linspace(box_x._lo, box_x._hi, int(round((box_x._hi - box_x._lo) / step)) + 1)
    ys = np.linspace(box_y._lo, box_y._hi, int(round((box_y._hi - box_y._lo) / step)) + 1)
    # the y-only part of the objective, shared by every row
    ypart = -0.5 * R * ys * ys + v * ys - 0.5 * (ys - y_anchor) ** 2 / gamma
    best_val = np.inf
    best = None
    for s in range(0, xs.size, chunk):
        xc = xs[s:s + chunk]
        xpart = 0.5 * P * xc * xc + u * xc + 0.5 * (xc - x_anchor) ** 2 / eta + k
        vals = xpart[:, None] + ypart[None, :] + C * np.multiply.outer(xc, ys)
        jmax = vals.argmax(axis=1)
        inner = vals[np.arange(xc.size), jmax]
        i = int(inner.argmin())
        if inner[i] < best_val:
            best_val = inner[i]
            best = (float(xc[i]), float(ys[jmax[i]]))
    return best
