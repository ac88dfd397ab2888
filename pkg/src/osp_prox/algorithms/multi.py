"""Lagged predictors and the multi-predictor wrapper around OptOPPM."""

from __future__ import annotations

import math

from collections import deque
from typing import Sequence

import numpy as np

from ..geometry import BoxSet
from ..inner_solvers import DEFAULT_TOL
from ..invariants import HEDGE_FEASIBLE, InvariantLog
from ..payoffs import PayoffOracle, ZeroPayoff, combine
from .hedge import ClippedHedge
from .optoppm import OptOppm


class PredictorBank:
    """Predicts ``h^k_t = f_{t - lag_k}``, or the zero payoff before that exists."""

    def __init__(self, lags: Sequence[int]):
        lags = tuple(int(k) for k in lags)
        if not lags or min(lags) < 1:
            raise ValueError("lags must be a non-empty list of positive integers")
        self.lags = lags
        self._history = deque(maxlen=max(lags))
        self._zero = ZeroPayoff()

    def __len__(self):
        return len(self.lags)

    def predictions(self) -> list:
        hist = self._history
        n = len(hist)
        return [hist[-k] if n >= k else self._zero for k in self.lags]

    def push(self, f: PayoffOracle) -> None:
        self._history.append(f)


def loss_vector(f, predictions, x, x_aux_next, y, y_aux_next) -> np.ndarray:
    """Per-expert loss: worst absolute prediction error at the three points
    ``(x, y)``, ``(x_aux_next, y)`` and ``(x, y_aux_next)``."""
    pts = ((x, y), (x_aux_next, y), (x, y_aux_next))
    fv = [f.value(px, py) for px, py in pts]
    out = np.empty(len(predictions))
    for k, h in enumerate(predictions):
        out[k] = max(abs(fv[i] - h.value(px, py)) for i, (px, py) in enumerate(pts))
    return out


class LaggedOptOppm:
    """OptOPPM fed by a single lagged predictor."""

    def __init__(self, box_x: BoxSet, box_y: BoxSet, x0, y0, lag: int = 4, epsilon: float = 0.1,
                 C1: float = 1.0, C2: float = 1.0, tol: float = DEFAULT_TOL,
                 invariants: InvariantLog | None = None):
        self.inner = OptOppm(box_x, box_y, x0, y0, epsilon, C1, C2, tol, invariants)
        self.bank = PredictorBank([lag])
        self.invariants = self.inner.invariants

    @property
    def t(self):
        return self.inner.t

    def emit(self):
        return self.inner.emit(self.bank.predictions()[0])

    def observe(self, f, best_responses=None):
        diag = self.inner.observe(f, best_responses)
        self.bank.push(f)
        return diag


class MultiPredictorOptOppm:
    """OptOPPM whose predictor is a clipped-Hedge mixture of lagged payoffs.

    Each round the bank's predictions are mixed with the current expert
    weights, OptOPPM plays against the mixture, and the experts are scored
    by their worst absolute error at the three evaluation points of the
    round.
    """

    def __init__(self, box_x: BoxSet, box_y: BoxSet, x0, y0, lags: Sequence[int] = (4, 5, 6),
                 epsilon: float = 0.1, C1: float = 1.0, C2: float = 1.0,
                 hedge_T_guess: int | None = None, tol: float = DEFAULT_TOL,
                 invariants: InvariantLog | None = None):
        self.inner = OptOppm(box_x, box_y, x0, y0, epsilon, C1, C2, tol, invariants)
        self.bank = PredictorBank(lags)
        self.hedge = ClippedHedge(len(self.bank), hedge_T_guess, epsilon)
        self.invariants = self.inner.invariants
        self._preds = None

    @property
    def t(self):
        return self.inner.t

    @property
    def weights(self) -> np.ndarray:
        return self.hedge.weights

    def emit(self):
        self._preds = self.bank.predictions()
        h = combine(self.hedge.weights, self._preds)
        return self.inner.emit(h)

    def observe(self, f, best_responses=None):
        if self._preds is None:
            raise RuntimeError("observe() called without a preceding emit()")
        diag = self.inner.observe(f, best_responses)
        L = loss_vector(f, self._preds, diag.x, diag.x_aux_next, diag.y, diag.y_aux_next)
        step = self.hedge.step(L, diag.t)
        w = step.weights
        wl = w.tolist()
        self.invariants.check(
            HEDGE_FEASIBLE,
            abs(math.fsum(wl) - 1.0) <= 1e-12 and min(wl) >= step.alpha / self.hedge.d - 1e-12,
            diag.t,
            lambda: f"weights {w.tolist()} off the clipped simplex (alpha={step.alpha})",
        )
        self.bank.push(f)
        self._preds = None
        diag.losses = L
        diag.weights = w.copy()
        diag.hedge_sigma = step.sigma
        diag.hedge_theta = step.theta
        return diag


def multi_predictor_round(algo: MultiPredictorOptOppm, f: PayoffOracle, best_responses=None):
    """One full emit/observe round against an oblivious payoff ``f``."""
    algo.emit()
    return algo.observe(f, best_responses)
