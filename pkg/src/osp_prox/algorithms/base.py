"""Shared pieces of the emit/observe state machines."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..geometry import BoxSet
from ..invariants import IN_BOX, InvariantLog


@dataclass
class RoundDiagnostics:
    t: int
    x: object
    y: object
    x_br: object
    y_br: object
    eta: float
    gamma: float
    stage_x: int
    stage_y: int
    doubled: bool
    # OPPM: the Delta / Sigma terms finalized this round (they belong to round t-1)
    delta_lagged: Optional[float] = None
    sigma_lagged: Optional[float] = None
    # OptOPPM
    delta1: Optional[float] = None
    delta2: Optional[float] = None
    x_aux_next: object = None
    y_aux_next: object = None
    # multi-predictor
    losses: Optional[np.ndarray] = None
    weights: Optional[np.ndarray] = None
    hedge_sigma: Optional[float] = None
    hedge_theta: Optional[float] = None


def best_responses_for(f, x, y, box_x: BoxSet, box_y: BoxSet):
    return f.best_response_x(y, box_x), f.best_response_y(x, box_y)


def check_in_box(log: InvariantLog, box_x: BoxSet, box_y: BoxSet, x, y, t: int, tol: float = 1e-12):
    log.check(IN_BOX, box_x.contains(x, tol) and box_y.contains(y, tol), t, lambda: f"pair ({x}, {y}) left the boxes")
