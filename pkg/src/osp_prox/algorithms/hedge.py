"""Clipped Hedge over the clipped simplex.

The clipped simplex with floor parameter ``alpha`` is
``{w >= 0 : sum(w) = 1, w_i >= alpha / d}``. Each Hedge step is a KL
projection of ``w * exp(-theta * L)`` onto it, done by
:func:`clipped_simplex_solve` in expected linear time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import HedgeError


def clipped_simplex_solve(W, alpha: float) -> np.ndarray:
    """KL projection of a nonnegative vector onto the clipped simplex.

    Solves ``argmin_{w} <ln(w / W), w>`` subject to ``sum(w) = 1`` and
    ``w_i >= alpha / d``. ``W`` need not be normalized.

    The search finds the clipping threshold by repeated median splits,
    keeping the count and mass of coordinates already pinned to the floor.
    Coordinates below the threshold get ``alpha / d``; the rest share the
    remaining mass proportionally to ``W``.

    Parameters
    ----------
    W : array_like
        Nonnegative, not all zero.
    alpha : float
        Floor parameter in ``[0, 1]``; ``alpha = 1`` forces the uniform vector.

    Returns
    -------
    numpy.ndarray
    """
    if isinstance(W, list) and 0 < len(W) <= _SMALL:
        return np.array(_clipped_small(W, alpha))
    W = np.asarray(W, dtype=float)
    if W.ndim != 1 or W.size == 0:
        raise ValueError("W must be a non-empty 1-D vector")
    if not np.all(np.isfinite(W)) or np.any(W < 0):
        raise ValueError("W must be finite and nonnegative")
    total = float(W.sum())
    if total <= 0.0:
        raise ValueError("W must not be all zero")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha} (floor alpha/d would exceed 1/d)")
    d = W.size
    if alpha == 1.0:
        return np.full(d, 1.0 / d)

    I = np.arange(d)
    n_clipped = 0
    m_clipped = 0.0
    thr = -math.inf
    while I.size:
        WI = W[I]
        k = (WI.size - 1) // 2
        med = np.partition(WI, k)[k]
        low = WI < med
        mid = WI == med
        high = WI > med
        s_low = float(WI[low].sum())
        n_low = int(low.sum())
        denom = total - (m_clipped + s_low)
        thr = med
        if med * (d - (n_clipped + n_low) * alpha) < alpha * denom:
            # median itself falls below the floor: clip everything up to it
            n_clipped += n_low + int(mid.sum())
            m_clipped += s_low + float(WI[mid].sum())
            if not high.any():
                above = W[W > med]
                thr = float(above.min()) if above.size else math.inf
            I = I[high]
        else:
            I = I[low]

    out = np.empty(d)
    clipped = W < thr
    out[clipped] = alpha / d
    free = ~clipped
    out[free] = W[free] * (d - n_clipped * alpha) / (d * (total - m_clipped))
    return out


_SMALL = 16


def _clipped_small(W: list, alpha: float) -> list:
    """The same median-threshold search on a short Python list.

    Avoids numpy call overhead for the handful of experts used per round.
    """
    for w in W:
        if not (w >= 0.0 and math.isfinite(w)):
            raise ValueError("W must be finite and nonnegative")
    total = math.fsum(W)
    if total <= 0.0:
        raise ValueError("W must not be all zero")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha} (floor alpha/d would exceed 1/d)")
    d = len(W)
    if alpha == 1.0:
        return [1.0 / d] * d
    I = list(W)
    n_clipped = 0
    m_clipped = 0.0
    thr = -math.inf
    while I:
        med = sorted(I)[(len(I) - 1) // 2]
        low = [w for w in I if w < med]
        n_mid = sum(1 for w in I if w == med)
        s_low = math.fsum(low)
        denom = total - (m_clipped + s_low)
        thr = med
        if med * (d - (n_clipped + len(low)) * alpha) < alpha * denom:
            n_clipped += len(low) + n_mid
            m_clipped += s_low + med * n_mid
            high = [w for w in I if w > med]
            if not high:
                above = [w for w in W if w > med]
                thr = min(above) if above else math.inf
            I = high
        else:
            I = low
    floor = alpha / d
    scale = (d - n_clipped * alpha) / (d * (total - m_clipped))
    return [floor if w < thr else w * scale for w in W]


def kl_divergence(p: np.ndarray, q: np.ndarray) -> float:
    mask = p > 0
    return float(np.sum(p[mask] * np.log(p[mask] / q[mask])))


@dataclass
class HedgeStep:
    weights: np.ndarray
    sigma: float
    theta: float
    T: int
    alpha: float
    doubled: bool


class ClippedHedge:
    """Clipped Hedge with adaptive rate and a doubling horizon guess.

    Parameters
    ----------
    d : int
        Number of experts.
    T_guess : int, optional
        Initial horizon guess, must exceed ``d``. Defaults to ``2 d + 1``.
    epsilon : float
        Offset keeping the first learning rate finite.
    """

    def __init__(self, d: int, T_guess: int | None = None, epsilon: float = 0.1):
        if d < 1:
            raise ValueError("need at least one expert")
        T = 2 * d + 1 if T_guess is None else int(T_guess)
        if T <= d:
            raise ValueError(f"T_guess must exceed d (alpha = d/T < 1); got T={T}, d={d}")
        if epsilon <= 0:
            raise ValueError("epsilon must be positive")
        self.d = d
        self.T = T
        self.epsilon = float(epsilon)
        self.weights = np.full(d, 1.0 / d)
        self.sigma_sum = 0.0
        self.theta = math.log(T) / self.epsilon

    @property
    def alpha(self) -> float:
        return self.d / self.T

    def step(self, losses, t: int) -> HedgeStep:
        """Update the weights with the loss vector of round ``t``."""
        if np.ndim(losses) != 1:
            raise ValueError(f"loss vector must have length {self.d}")
        L = [float(v) for v in losses]
        if len(L) != self.d:
            raise ValueError(f"loss vector must have length {self.d}")
        if not all(v >= 0.0 and math.isfinite(v) for v in L):
            raise HedgeError("losses must be finite and nonnegative")
        doubled = False
        while t > self.T:
            self.T *= 2
            doubled = True
        alpha = self.d / self.T
        theta = math.log(self.T) / (self.epsilon + self.sigma_sum)
        if not (theta > 0 and math.isfinite(theta)):
            raise HedgeError(f"Hedge learning rate became non-positive at round {t}: theta={theta}")
        w = self.weights.tolist()
        logW = [math.log(wi) - theta * li for wi, li in zip(w, L)]
        top = max(logW)
        new = clipped_simplex_solve([math.exp(v - top) for v in logW], alpha)
        nl = new.tolist()
        if not all(math.isfinite(v) for v in nl):
            raise HedgeError(f"non-finite expert weights at round {t}")
        kl = math.fsum(a * math.log(a / b) for a, b in zip(nl, w) if a > 0.0)
        sigma = math.fsum(li * (wi - ni) for li, wi, ni in zip(L, w, nl)) - kl / theta
        self.sigma_sum += sigma
        self.weights = new
        self.theta = theta
        return HedgeStep(new, sigma, theta, self.T, alpha, doubled)
