"""Optimistic OPPM: a prox step on a predictor, corrected on the realized payoff."""

from __future__ import annotations

from ..errors import NegativeDeltaError
from ..geometry import BoxSet, SquareNormRegularizer, coupling, dist
from ..inner_solvers import DEFAULT_TOL, ProxProblem, prox_max_step, prox_min_step, solve_joint_prox
from ..invariants import NEGATIVE_DELTA, RATE_MONOTONE, STABILITY, InvariantLog
from .base import RoundDiagnostics, best_responses_for, check_in_box

DELTA_TOL = 1e-9


class OptOppm:
    """OptOPPM with per-player adaptive rates and doubling presets.

    ``emit(h)`` plays the joint prox step of the predictor ``h`` anchored at
    the auxiliary pair; ``observe(f)`` moves the auxiliary pair by one-sided
    prox steps on the realized ``f`` and accumulates the correction terms
    ``delta1``, ``delta2`` that drive the rates::

        eta_t   = L_x (D_x + C1) / (epsilon + sum_{s<t} delta1_s)
        gamma_t = L_y (D_y + C2) / (epsilon + sum_{s<t} delta2_s)

    A player whose path length exceeds its preset doubles the preset and
    clears its delta sum. The correction of the doubling round was computed
    with the old stage's rate, so it is not carried into the new stage.
    """

    def __init__(
        self,
        box_x: BoxSet,
        box_y: BoxSet,
        x0,
        y0,
        epsilon: float = 0.1,
        C1: float = 1.0,
        C2: float = 1.0,
        tol: float = DEFAULT_TOL,
        invariants: InvariantLog | None = None,
    ):
        if epsilon <= 0 or C1 <= 0 or C2 <= 0:
            raise ValueError("epsilon, C1 and C2 must be positive")
        self.box_x = box_x
        self.box_y = box_y
        self.reg_x = SquareNormRegularizer(box_x)
        self.reg_y = SquareNormRegularizer(box_y)
        self.epsilon = float(epsilon)
        self.C1 = float(C1)
        self.C2 = float(C2)
        self.tol = tol
        self.invariants = invariants if invariants is not None else InvariantLog()
        self.x_aux = box_x.project(x0)
        self.y_aux = box_y.project(y0)
        self.x = self.x_aux
        self.y = self.y_aux
        self.t = 0
        self.stage1 = 0
        self.stage2 = 0
        self.path1 = 0.0
        self.path2 = 0.0
        self.delta1_sum = 0.0
        self.delta2_sum = 0.0
        self._prev_br = None
        self._h = None
        self._rep = None
        self._last_rates = (None, None)
        self._rate_stages = (None, None)

    def rates(self):
        eta = self.reg_x.lipschitz * (self.box_x.diameter + self.C1) / (self.epsilon + self.delta1_sum)
        gamma = self.reg_y.lipschitz * (self.box_y.diameter + self.C2) / (self.epsilon + self.delta2_sum)
        return eta, gamma

    def emit(self, h):
        """Play against the predictor ``h`` of the coming payoff."""
        t = self.t + 1
        eta, gamma = self.rates()
        bx, by = self.box_x, self.box_y
        rep = solve_joint_prox(ProxProblem(h, eta, gamma, self.x_aux, self.y_aux, bx, by), self.tol)
        log = self.invariants
        last_eta, last_gamma = self._last_rates
        st1, st2 = self._rate_stages
        if last_eta is not None and st1 == self.stage1:
            log.check(RATE_MONOTONE, eta <= last_eta, t, lambda: f"eta rose {last_eta} -> {eta}")
        if last_gamma is not None and st2 == self.stage2:
            log.check(RATE_MONOTONE, gamma <= last_gamma, t, lambda: f"gamma rose {last_gamma} -> {gamma}")
        self._last_rates = (eta, gamma)
        self._rate_stages = (self.stage1, self.stage2)
        log.check(
            STABILITY,
            dist(rep.x, self.x_aux) <= rep.eta * h.grad_bound_x(bx, by) + 1e-9
            and dist(rep.y, self.y_aux) <= rep.gamma * h.grad_bound_y(bx, by) + 1e-9,
            t,
            "predictor step moved farther than rate * gradient bound",
        )
        check_in_box(log, bx, by, rep.x, rep.y, t)
        self.x, self.y = rep.x, rep.y
        self._h = h
        self._rep = rep
        return self.x, self.y

    def observe(self, f, best_responses=None) -> RoundDiagnostics:
        if self._h is None:
            raise RuntimeError("observe() called without a preceding emit()")
        t = self.t + 1
        h, rep = self._h, self._rep
        x, y = self.x, self.y
        bx, by = self.box_x, self.box_y
        if best_responses is None:
            best_responses = best_responses_for(f, x, y, bx, by)
        xb, yb = best_responses

        if self._prev_br is not None:
            self.path1 += dist(xb, self._prev_br[0])
            self.path2 += dist(yb, self._prev_br[1])
        doubled1 = doubled2 = False
        while self.path1 > self.C1:
            self.C1 *= 2.0
            self.stage1 += 1
            doubled1 = True
        while self.path2 > self.C2:
            self.C2 *= 2.0
            self.stage2 += 1
            doubled2 = True
        if doubled1:
            self.delta1_sum = 0.0
        if doubled2:
            self.delta2_sum = 0.0

        eta, gamma = rep.eta, rep.gamma
        xn = prox_min_step(f, y, eta, self.x_aux, bx, self.tol)
        yn = prox_max_step(f, x, gamma, self.y_aux, by, self.tol)

        f_xy = f.value(x, y)
        h_xy = h.value(x, y)
        d1 = f_xy - h_xy + h.value(xn, y) - f.value(xn, y) - coupling(self.reg_x, xn, x) / eta
        d2 = f.value(x, yn) - h.value(x, yn) + h_xy - f_xy - coupling(self.reg_y, yn, y) / gamma
        log = self.invariants
        log.check(NEGATIVE_DELTA, d1 >= -DELTA_TOL and d2 >= -DELTA_TOL, t, lambda: f"delta1={d1!r}, delta2={d2!r}")
        if d1 < -DELTA_TOL or d2 < -DELTA_TOL:
            raise NegativeDeltaError(
                f"negative-delta at round {t}: delta1={d1!r}, delta2={d2!r} "
                "(emit and observe predictors differ or an inner solve was inexact)"
            )
        if not doubled1:
            self.delta1_sum += d1 if d1 > 0.0 else 0.0
        if not doubled2:
            self.delta2_sum += d2 if d2 > 0.0 else 0.0

        log.check(
            STABILITY,
            dist(xn, self.x_aux) <= eta * f.grad_bound_x(bx, by) + 1e-9
            and dist(yn, self.y_aux) <= gamma * f.grad_bound_y(bx, by) + 1e-9,
            t,
            "auxiliary step moved farther than rate * gradient bound",
        )
        check_in_box(log, bx, by, xn, yn, t)

        self.x_aux, self.y_aux = xn, yn
        self._prev_br = (xb, yb)
        self._h = None
        self.t = t
        return RoundDiagnostics(
            t=t, x=x, y=y, x_br=xb, y_br=yb, eta=eta, gamma=gamma,
            stage_x=self.stage1, stage_y=self.stage2, doubled=doubled1 or doubled2,
            delta1=d1, delta2=d2, x_aux_next=xn, y_aux_next=yn,
        )
