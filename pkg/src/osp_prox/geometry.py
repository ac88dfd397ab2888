"""Box feasible sets and the squared-norm regularizer.

Points are plain Python floats for one-dimensional boxes and 1-D numpy
arrays otherwise. The float path matters: the experiment loops call these
helpers millions of times and numpy scalar overhead dominates there.
"""

from __future__ import annotations

import math
from typing import Union

import numpy as np

from .errors import DimensionError

Point = Union[float, np.ndarray]


def norm(v: Point) -> float:
    """Euclidean norm of a float or vector."""
    if isinstance(v, np.ndarray):
        return float(np.linalg.norm(v))
    return abs(v)


def dist(a: Point, b: Point) -> float:
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return float(np.linalg.norm(np.asarray(a, float) - np.asarray(b, float)))
    return abs(a - b)


class BoxSet:
    """Axis-aligned box ``{p : lower <= p <= upper}``.

    Parameters
    ----------
    lower, upper : float or array_like
        Per-coordinate bounds, finite, with ``lower <= upper``.
    """

    __slots__ = ("lower", "upper", "dim", "_lo", "_hi", "_diameter")

    def __init__(self, lower, upper):
        lo = np.atleast_1d(np.asarray(lower, dtype=float)).copy()
        hi = np.atleast_1d(np.asarray(upper, dtype=float)).copy()
        if lo.ndim != 1 or lo.shape != hi.shape:
            raise DimensionError("lower and upper must be 1-D with equal shapes")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise ValueError("box bounds must be finite")
        if np.any(lo > hi):
            raise ValueError("box requires lower <= upper coordinate-wise")
        lo.setflags(write=False)
        hi.setflags(write=False)
        self.lower = lo
        self.upper = hi
        self.dim = lo.shape[0]
        self._lo = float(lo[0]) if self.dim == 1 else None
        self._hi = float(hi[0]) if self.dim == 1 else None
        self._diameter = float(np.linalg.norm(hi - lo))

    @classmethod
    def interval(cls, lo: float, hi: float) -> "BoxSet":
        return cls([lo], [hi])

    @classmethod
    def cube(cls, lo: float, hi: float, dim: int) -> "BoxSet":
        return cls(np.full(dim, lo), np.full(dim, hi))

    @property
    def diameter(self) -> float:
        return self._diameter

    def project(self, p: Point) -> Point:
        """Clamp ``p`` coordinate-wise into the box."""
        if self.dim == 1 and not isinstance(p, np.ndarray):
            p = float(p)
            lo, hi = self._lo, self._hi
            return lo if p < lo else (hi if p > hi else p)
        arr = np.asarray(p, dtype=float)
        if arr.shape != (self.dim,):
            raise DimensionError(f"expected a point of dimension {self.dim}, got shape {arr.shape}")
        return np.minimum(np.maximum(arr, self.lower), self.upper)

    def contains(self, p: Point, tol: float = 0.0) -> bool:
        if self.dim == 1 and not isinstance(p, np.ndarray):
            return self._lo - tol <= p <= self._hi + tol
        arr = np.asarray(p, dtype=float)
        if arr.shape != (self.dim,):
            raise DimensionError(f"expected a point of dimension {self.dim}, got shape {arr.shape}")
        return bool(np.all(arr >= self.lower - tol) and np.all(arr <= self.upper + tol))

    def from_unit(self, u) -> Point:
        """Map uniform draws in [0, 1) to a point of the box."""
        if self.dim == 1:
            u0 = float(np.atleast_1d(u)[0])
            return self._lo + u0 * (self._hi - self._lo)
        u = np.asarray(u, dtype=float)
        return self.lower + u * (self.upper - self.lower)

    def corners(self) -> list:
        if self.dim == 1:
            return [self._lo, self._hi]
        grids = np.array(np.meshgrid(*zip(self.lower, self.upper), indexing="ij"))
        return list(grids.reshape(self.dim, -1).T)

    def __eq__(self, other):
        if not isinstance(other, BoxSet):
            return NotImplemented
        return np.array_equal(self.lower, other.lower) and np.array_equal(self.upper, other.upper)

    def __hash__(self):
        return hash((tuple(self.lower), tuple(self.upper)))

    def __repr__(self):
        if self.dim == 1:
            return f"BoxSet([{self._lo}, {self._hi}])"
        return f"BoxSet(lower={self.lower.tolist()}, upper={self.upper.tolist()})"


class SquareNormRegularizer:
    """The regularizer ``1/2 ||x||^2`` restricted to a box.

    Its Fenchel coupling reduces to ``1/2 ||x - anchor||^2``; it is
    1-strongly convex and the coupling is Lipschitz in its first argument
    with constant equal to the box diameter.
    """

    mu = 1.0

    def __init__(self, box: BoxSet):
        self.box = box

    @property
    def lipschitz(self) -> float:
        return self.box.diameter

    def anchor_gradient(self, x: Point) -> Point:
        return x

    def coupling(self, x: Point, anchor: Point) -> float:
        return coupling(self, x, anchor)


def project(box: BoxSet, p: Point) -> Point:
    return box.project(p)


def diameter(box: BoxSet) -> float:
    return box.diameter


def coupling(reg: SquareNormRegularizer, x: Point, anchor: Point) -> float:
    """Fenchel coupling of the squared norm: ``1/2 ||x - anchor||^2``."""
    if isinstance(x, np.ndarray) or isinstance(anchor, np.ndarray):
        xa = np.asarray(x, dtype=float)
        aa = np.asarray(anchor, dtype=float)
        if xa.shape != aa.shape:
            raise DimensionError(f"shape mismatch {xa.shape} vs {aa.shape}")
        d = xa - aa
        return 0.5 * float(d @ d)
    d = x - anchor
    return 0.5 * d * d


def is_finite_point(p: Point) -> bool:
    if isinstance(p, np.ndarray):
        return bool(np.all(np.isfinite(p)))
    return math.isfinite(p)
