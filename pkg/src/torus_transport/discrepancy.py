"""Discrepancy of finite point sets in [0, 1) and its relation to W_1."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import SizeCapError, ValidationError
from .measures import AtomicMeasure, Cdf
from .transport import _abs_power_mean, w1_circle

__all__ = [
    "PointSet",
    "star_discrepancy",
    "extreme_discrepancy",
    "lp_discrepancy",
    "w1_vs_discrepancy_gap",
]

EXTREME_CAP = 100_000


@dataclass(frozen=True)
class PointSet:
    """Sorted points of ``[0, 1)`` with optional weights (default ``1/N`` each).

    Repeated points are kept; they simply contribute twice to every count.
    """

    points: np.ndarray
    weights: np.ndarray | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).ravel()
        if pts.size == 0:
            raise ValidationError("a point set needs at least one point")
        if not np.all(np.isfinite(pts)):
            raise ValidationError("points must be finite")
        pts = pts % 1.0
        pts[pts >= 1.0] = 0.0
        if self.weights is None:
            w = np.full(pts.size, 1.0 / pts.size)
        else:
            w = np.asarray(self.weights, dtype=float).ravel()
            if w.shape != pts.shape or np.any(w <= 0):
                raise ValidationError("weights must be positive and match the points")
            w = w / math.fsum(w)
        order = np.argsort(pts, kind="stable")
        pts, w = pts[order], w[order]
        pts.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_measure(cls, a: AtomicMeasure) -> "PointSet":
        return cls(a.locations, a.weights)

    @classmethod
    def from_file(cls, path) -> "PointSet":
        """One value per line; blank lines and ``#`` comments are ignored."""
        vals = []
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.split("#", 1)[0].strip().rstrip(",")
            if line:
                vals.append(float(line))
        return cls(np.array(vals))

    @property
    def N(self) -> int:
        return self.points.size

    def measure(self) -> AtomicMeasure:
        return AtomicMeasure(self.points, self.weights)

    def _counts(self):
        closed = np.cumsum(self.weights)
        closed[-1] = 1.0
        return closed - self.weights, closed


def star_discrepancy(ps: PointSet) -> float:
    """``max_x |A([0, x]) - x|`` from the sorted-order formula."""
    below, upto = ps._counts()
    x = ps.points
    return float(max(np.max(upto - x), np.max(x - below)))


def extreme_discrepancy(ps: PointSet) -> float:
    """Supremum of ``|mu(J) - |J||`` over all arcs ``J``, wrapping allowed.

    With ``g(x) = A([0, x]) - x`` every arc contributes a difference of two
    one-sided values of ``g`` (``g(0) = g(1) = 0``), so the supremum is the
    largest closed value minus the smallest open value.
    """
    if ps.N > EXTREME_CAP:
        raise SizeCapError(f"extreme_discrepancy is capped at {EXTREME_CAP} points")
    below, upto = ps._counts()
    x = ps.points
    hi = max(0.0, float(np.max(upto - x)))
    lo = min(0.0, float(np.min(below - x)))
    return hi - lo


def lp_discrepancy(ps: PointSet, p: float = 2.0) -> float:
    """``(int_0^1 |A([0, x]) - x|^p dx)^{1/p}``, integrated exactly between points."""
    p = float(p)
    if p < 1:
        raise ValidationError("p must be >= 1")
    _, upto = ps._counts()
    x = np.concatenate([[0.0], ps.points, [1.0]])
    level = np.concatenate([[0.0], upto])
    h = np.diff(x)
    d0 = level - x[:-1]
    d1 = level - x[1:]
    keep = h > 0
    total = math.fsum(h[keep] * _abs_power_mean(d0[keep], d1[keep], p))
    return total ** (1.0 / p)


def w1_vs_discrepancy_gap(ps: PointSet) -> tuple[float, float, float]:
    """``(W_1(mu_N, dx), extreme discrepancy, ratio)`` on the circle."""
    w1 = w1_circle(ps.measure(), Cdf.uniform(1.0)).cost
    disc = extreme_discrepancy(ps)
    return float(w1), disc, float(w1 / disc) if disc > 0 else 0.0
