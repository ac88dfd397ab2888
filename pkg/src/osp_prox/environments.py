"""Payoff streams for the synthetic experiments.

Saddles are written in complex form ``x* + i y*``:

=============  ==============================================  ===========
kind           saddle at round t                               domain
=============  ==============================================  ===========
case1          z2(t) exp(i z1(t))                              [-4, 4]^2
case2          z2(t) exp(i (pi t + z2(t)))                     [-4, 4]^2
case3          z2(t) exp(i (2 pi t / 3 + z2(t)))               [-4, 4]^2
case4          sqrt(2) exp(i (8 pi / 9 + arg(x_t + i y_t)))    [-4, 4]^2
stationary     fixed saddle                                    [-4, 4]^2
nereg_cancel   displaced from the played pair (see below)      [-1, 1]^2
custom         user list, cycled                               [-4, 4]^2
=============  ==============================================  ===========

with ``z1(t) = ln(1 + t)`` and ``z2(t) = ln ln(e + t)``. All kinds except
``nereg_cancel`` emit :class:`QuadraticSaddle` payoffs; ``nereg_cancel``
emits :class:`SeparableSaddle` payoffs whose saddle sits at unit distance
from the played pair along x on even rounds and along y on odd rounds, so
the played value alternates between +1 and -1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .geometry import BoxSet
from .payoffs import QuadraticSaddle, SeparableSaddle

KINDS = ("case1", "case2", "case3", "case4", "stationary", "nereg_cancel", "custom")
ADAPTIVE_KINDS = ("case4", "nereg_cancel")

_E = math.e


def z1(t: float) -> float:
    return math.log1p(t)


def z2(t: float) -> float:
    return math.log(math.log(_E + t))


def _polar(r: float, theta: float):
    return r * math.cos(theta), r * math.sin(theta)


def _arg(x: float, y: float) -> float:
    if x == 0.0 and y == 0.0:
        return 0.0
    return math.atan2(y, x)


@dataclass
class Environment:
    """A payoff stream ``t, last_pair -> f_t``.

    Parameters
    ----------
    kind : str
        One of :data:`KINDS`.
    saddle : tuple, optional
        Fixed saddle for ``stationary``.
    saddles : sequence of tuple, optional
        Saddle list for ``custom``; round ``t`` uses entry ``(t - 1) % len``.
    """

    kind: str
    saddle: Optional[tuple] = None
    saddles: Optional[Sequence[tuple]] = None
    box_x: BoxSet = field(default=None)
    box_y: BoxSet = field(default=None)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown environment kind {self.kind!r}; expected one of {KINDS}")
        if self.box_x is None or self.box_y is None:
            half = 1.0 if self.kind == "nereg_cancel" else 4.0
            self.box_x = self.box_x or BoxSet.interval(-half, half)
            self.box_y = self.box_y or BoxSet.interval(-half, half)
        if self.kind == "stationary":
            if self.saddle is None:
                raise ValueError("stationary environment needs a saddle")
            self.saddle = (float(self.saddle[0]), float(self.saddle[1]))
            self._check_inside(self.saddle)
            self._fixed = QuadraticSaddle(*self.saddle)
        if self.kind == "custom":
            if not self.saddles:
                raise ValueError("custom environment needs a non-empty saddle list")
            self.saddles = [(float(a), float(b)) for a, b in self.saddles]
            for sp in self.saddles:
                self._check_inside(sp)
            self._custom = [QuadraticSaddle(a, b) for a, b in self.saddles]

    def _check_inside(self, sp):
        if not (self.box_x.contains(sp[0]) and self.box_y.contains(sp[1])):
            raise ValueError(f"saddle {sp} lies outside the boxes")

    @property
    def oblivious(self) -> bool:
        return self.kind not in ADAPTIVE_KINDS

    def saddle_at(self, t: int, last_pair=None) -> tuple:
        k = self.kind
        if k == "case1":
            return _polar(z2(t), z1(t))
        if k == "case2":
            return _polar(z2(t), math.pi * t + z2(t))
        if k == "case3":
            return _polar(z2(t), 2.0 * math.pi * t / 3.0 + z2(t))
        if k == "case4":
            x, y = last_pair
            return _polar(math.sqrt(2.0), 8.0 * math.pi / 9.0 + _arg(x, y))
        if k == "stationary":
            return self.saddle
        if k == "custom":
            return self.saddles[(t - 1) % len(self.saddles)]
        # nereg_cancel
        x, y = last_pair
        if t % 2 == 0:
            return (x + (1.0 if x < 0 else -1.0), y)
        return (x, y + (1.0 if y < 0 else -1.0))

    def next_payoff(self, t: int, last_pair=None):
        """Payoff revealed at round ``t`` after the players committed ``last_pair``."""
        if t < 1:
            raise ValueError("rounds start at t = 1")
        if not self.oblivious and last_pair is None:
            raise ValueError(f"{self.kind} reacts to the played pair; pass last_pair")
        if self.kind == "stationary":
            return self._fixed
        if self.kind == "custom":
            return self._custom[(t - 1) % len(self._custom)]
        a, b = self.saddle_at(t, last_pair)
        if not (self.box_x.contains(a) and self.box_y.contains(b)):
            raise RuntimeError(f"{self.kind}: saddle ({a}, {b}) escaped the box at round {t}")
        if self.kind == "nereg_cancel":
            return SeparableSaddle(a, b)
        return QuadraticSaddle(a, b)

    def nash_value(self, t: int) -> float:
        """Per-round maxmin value; zero for every shipped stream."""
        return 0.0


def next_payoff(env: Environment, t: int, last_pair=None):
    return env.next_payoff(t, last_pair)


def nash_value(env: Environment, t: int) -> float:
    return env.nash_value(t)
