"""Online proximal point method with adaptive rates and doubling."""

from __future__ import annotations

from ..geometry import BoxSet, SquareNormRegularizer, dist
from ..inner_solvers import DEFAULT_TOL, ProxProblem, solve_joint_prox
from ..invariants import RATE_MONOTONE, STABILITY, TELESCOPING, InvariantLog
from .base import RoundDiagnostics, best_responses_for, check_in_box


class Oppm:
    """OPPM as an emit/observe state machine.

    Each round the pair ``(x_t, y_t)`` is emitted, ``f_t`` is revealed, and
    the next pair is the joint prox step of ``f_t`` anchored at the current
    pair with ``eta_t = gamma_t = L (2D + C) / (epsilon + sum Delta)``.

    ``Delta_t`` depends on the best response at round ``t + 1``, so the
    summands of round ``t - 1`` are finalized during round ``t``, after the
    rate has been fixed. The rate therefore sees ``Delta`` up to ``t - 2``.

    When the comparator path length exceeds ``C``, ``C`` doubles (repeatedly
    if needed) and a new stage starts: the Sigma / Delta accumulators are
    cleared and the current iterate is kept.
    """

    def __init__(
        self,
        box_x: BoxSet,
        box_y: BoxSet,
        x0,
        y0,
        epsilon: float = 0.1,
        C: float = 1.0,
        tol: float = DEFAULT_TOL,
        invariants: InvariantLog | None = None,
    ):
        if epsilon <= 0 or C <= 0:
            raise ValueError("epsilon and C must be positive")
        self.box_x = box_x
        self.box_y = box_y
        self.reg_x = SquareNormRegularizer(box_x)
        self.reg_y = SquareNormRegularizer(box_y)
        self.L = max(self.reg_x.lipschitz, self.reg_y.lipschitz)
        self.D = max(box_x.diameter, box_y.diameter)
        self.epsilon = float(epsilon)
        self.C = float(C)
        self.tol = tol
        self.invariants = invariants if invariants is not None else InvariantLog()
        self.x = box_x.project(x0)
        self.y = box_y.project(y0)
        self.t = 0
        self.stage = 0
        self.path = 0.0
        self._prev_br = None
        self._reset_stage()

    def _reset_stage(self):
        self.sigma1_sum = 0.0
        self.sigma2_sum = 0.0
        self.sigma_max = 0.0
        self.delta_sum = 0.0
        self._sigma_peak = 0.0  # tracked apart from _update_delta to audit it
        self._pending = None
        self._last_eta = None

    def _update_delta(self, sigma: float) -> float:
        # Delta = (Sigma - running max)_+, so sum Delta tracks the running max
        delta = sigma - self.sigma_max if sigma > self.sigma_max else 0.0
        self.delta_sum += delta
        if sigma > self.sigma_max:
            self.sigma_max = sigma
        return delta

    def current_rate(self) -> float:
        return self.L * (2.0 * self.D + self.C) / (self.epsilon + self.delta_sum)

    def emit(self):
        return self.x, self.y

    def observe(self, f, best_responses=None) -> RoundDiagnostics:
        t = self.t + 1
        x, y = self.x, self.y
        bx, by = self.box_x, self.box_y
        if best_responses is None:
            best_responses = best_responses_for(f, x, y, bx, by)
        xb, yb = best_responses

        if self._prev_br is not None:
            self.path += dist(xb, self._prev_br[0]) + dist(yb, self._prev_br[1])
        doubled = False
        while self.path > self.C:
            self.C *= 2.0
            self.stage += 1
            doubled = True
        if doubled:
            self._reset_stage()

        eta = self.current_rate()
        rep = solve_joint_prox(ProxProblem(f, eta, eta, x, y, bx, by), self.tol)
        xn, yn = rep.x, rep.y

        delta = sigma = None
        if self._pending is not None:
            fp, xp, yp, xbp, ybp = self._pending
            f_prev_pair = fp.value(xp, yp)
            f_now = fp.value(x, y)
            s1 = f_prev_pair - f_now + fp.value(xb, y) - fp.value(xbp, yp)
            s2 = fp.value(xp, ybp) - fp.value(x, yb) + f_now - f_prev_pair
            self.sigma1_sum += s1
            self.sigma2_sum += s2
            sigma = max(self.sigma1_sum, self.sigma2_sum, 0.0)
            delta = self._update_delta(sigma)
            if sigma > self._sigma_peak:
                self._sigma_peak = sigma
            self.invariants.check(
                TELESCOPING,
                abs(self.delta_sum - self._sigma_peak) <= 1e-12 * max(1.0, self._sigma_peak),
                t,
                lambda: f"sum Delta={self.delta_sum!r} vs max Sigma={self._sigma_peak!r}",
            )
        self._pending = (f, x, y, xb, yb)

        log = self.invariants
        if self._last_eta is not None:
            log.check(RATE_MONOTONE, eta <= self._last_eta, t, lambda: f"eta rose {self._last_eta} -> {eta}")
        self._last_eta = eta
        gx = f.grad_bound_x(bx, by)
        gy = f.grad_bound_y(bx, by)
        log.check(
            STABILITY,
            dist(x, xn) <= rep.eta * gx + 1e-9 and dist(y, yn) <= rep.gamma * gy + 1e-9,
            t,
            lambda: f"step ({dist(x, xn)}, {dist(y, yn)}) vs bounds ({rep.eta * gx}, {rep.gamma * gy})",
        )
        check_in_box(log, bx, by, xn, yn, t)

        self.x, self.y = xn, yn
        self._prev_br = (xb, yb)
        self.t = t
        return RoundDiagnostics(
            t=t, x=x, y=y, x_br=xb, y_br=yb, eta=rep.eta, gamma=rep.gamma,
            stage_x=self.stage, stage_y=self.stage, doubled=doubled,
            delta_lagged=delta, sigma_lagged=sigma,
        )
