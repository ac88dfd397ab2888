"""Online accumulators for duality gap, NE regret and related quantities."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import SaddleNotInteriorError
from .geometry import BoxSet, dist
from .invariants import DGAP_DECOMPOSITION, DGAP_NONNEGATIVE, NEREG_DOMINATION, InvariantLog


@dataclass
class RoundIncrements:
    x_br: object
    y_br: object
    reg1: float
    reg2: float
    dgap: float
    nereg: Optional[float]
    path: float
    vt: Optional[float]


@dataclass
class Snapshot:
    t: int
    dgap_avg: float
    nereg_avg: Optional[float]
    reg1_avg: float
    reg2_avg: float
    path: float
    vt: Optional[float]


class MetricsAccumulator:
    """Running sums of the per-round performance quantities.

    ``dgap`` is ``f(x, y') - f(x', y)`` with ``x', y'`` the best responses
    to the played pair; it splits as ``reg1 + reg2``. NE regret is kept as a
    signed sum of ``f(x, y) - maxmin f``; the absolute value is taken only
    in :meth:`snapshot`, so cancellation across rounds is visible.

    The first comparator-path increment is zero (the comparator before
    round 1 is taken to be the round-1 best response), and so is the first
    temporal-variability increment.
    """

    def __init__(self, box_x: BoxSet, box_y: BoxSet, invariants: InvariantLog | None = None):
        self.box_x = box_x
        self.box_y = box_y
        self.invariants = invariants if invariants is not None else InvariantLog()
        self.t = 0
        self.dgap_sum = 0.0
        self.nereg_signed_sum = 0.0
        self.reg1_sum = 0.0
        self.reg2_sum = 0.0
        self.path_sum = 0.0
        self.vt_sum = 0.0
        self.vprime_sum = 0.0
        self.nereg_available = True
        self.vt_available = True
        self.vprime_available = True
        self._prev_br = None
        self._prev_f = None

    def best_responses(self, f, x, y):
        return f.best_response_x(y, self.box_x), f.best_response_y(x, self.box_y)

    def record_round(self, f, x, y, best_responses=None) -> RoundIncrements:
        t = self.t + 1
        if best_responses is None:
            best_responses = self.best_responses(f, x, y)
        xb, yb = best_responses
        f_xy = f.value(x, y)
        reg1 = f_xy - f.value(xb, y)
        reg2 = f.value(x, yb) - f_xy
        dgap = reg1 + reg2
        self.reg1_sum += reg1
        self.reg2_sum += reg2
        self.dgap_sum += dgap

        nereg = None
        if self.nereg_available:
            try:
                nereg = f_xy - f.minimax_value(self.box_x, self.box_y)
            except (NotImplementedError, SaddleNotInteriorError):
                self.nereg_available = False
            else:
                self.nereg_signed_sum += nereg

        path = 0.0
        if self._prev_br is not None:
            path = dist(xb, self._prev_br[0]) + dist(yb, self._prev_br[1])
        self.path_sum += path

        vt = None
        if self.vt_available:
            if self._prev_f is None:
                vt = 0.0
            else:
                vt = f.rho_distance(self._prev_f, self.box_x, self.box_y)
            if vt is None:
                self.vt_available = False
            else:
                self.vt_sum += vt

        log = self.invariants
        log.check(DGAP_NONNEGATIVE, dgap >= -1e-12, t, lambda: f"dgap increment {dgap!r}")
        log.check(
            DGAP_DECOMPOSITION,
            abs(self.dgap_sum - (self.reg1_sum + self.reg2_sum)) <= 1e-9 * t,
            t,
            "D-Gap differs from Reg1 + Reg2",
        )
        if self.nereg_available:
            log.check(
                NEREG_DOMINATION,
                abs(self.nereg_signed_sum) <= self.dgap_sum + 1e-9 * t,
                t,
                lambda: f"|NE-Reg|={abs(self.nereg_signed_sum)!r} > D-Gap={self.dgap_sum!r}",
            )

        self._prev_br = (xb, yb)
        self._prev_f = f
        self.t = t
        return RoundIncrements(xb, yb, reg1, reg2, dgap, nereg, path, vt)

    def record_prediction(self, f, h) -> Optional[float]:
        """Add ``rho(f_t, h_t)`` to the predictor-error sum, when computable."""
        if not self.vprime_available:
            return None
        r = f.rho_distance(h, self.box_x, self.box_y)
        if r is None:
            self.vprime_available = False
            return None
        self.vprime_sum += r
        return r

    def snapshot(self, t: int | None = None) -> Snapshot:
        t = self.t if t is None else t
        if t < 1:
            raise ValueError("snapshot needs t >= 1")
        return Snapshot(
            t=t,
            dgap_avg=self.dgap_sum / t,
            nereg_avg=abs(self.nereg_signed_sum) / t if self.nereg_available else None,
            reg1_avg=self.reg1_sum / t,
            reg2_avg=self.reg2_sum / t,
            path=self.path_sum,
            vt=self.vt_sum if self.vt_available else None,
        )


def record_round(acc: MetricsAccumulator, f, x, y, best_responses=None) -> RoundIncrements:
    return acc.record_round(f, x, y, best_responses)


def snapshot(acc: MetricsAccumulator, t: int | None = None) -> Snapshot:
    return acc.snapshot(t)
