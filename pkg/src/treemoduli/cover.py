"""The piecewise Mobius three-fold cover of the circle and its relatives.

The projective line splits into the closed intervals [-inf, 0], [0, 1]
and [1, inf].  Gluing x -> 1/(1-x), x -> x and x -> 1 - 1/x along them
yields a continuous three-fold cover of the circle R/Z that collapses
the order-three rotation of the line; composing with the logit map gives
a three-fold cover of the line itself, whose value on a cross-ratio is
the signed hyperbolic length of the internal edge of the corresponding
rooted three-leaf tree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .projline import (
    INFINITY,
    ONE,
    POINT_TOL,
    ZERO,
    ProjPoint,
    chordal,
    cross_ratio,
)

__all__ = [
    "CirclePoint",
    "circle_distance",
    "Interval",
    "classify",
    "circle_cover",
    "cover_derivative",
    "cover_integral",
    "logit",
    "line_cover",
    "devadoss_length",
    "winding_number",
    "DomainError",
    "LiftStepTooLarge",
]


class DomainError(ArithmeticError):
    """Input outside the domain of the logit map."""


class LiftStepTooLarge(ArithmeticError):
    """Consecutive loop samples too far apart for a well-defined lift."""


@dataclass(frozen=True)
class CirclePoint:
    """Element of R/Z, stored as the representative in [0, 1)."""

    t: float

    def __post_init__(self):
        r = self.t % 1.0
        if r >= 1.0:  # t % 1.0 can round up to 1.0 for tiny negative t
            r = 0.0
        object.__setattr__(self, "t", r)

    def distance(self, other: "CirclePoint") -> float:
        return circle_distance(self, other)

    def __float__(self) -> float:
        return self.t


def circle_distance(s: CirclePoint | float, t: CirclePoint | float) -> float:
    """Arc-length metric on R/Z, normalized to total length 1."""
    d = abs(float(s) % 1.0 - float(t) % 1.0)
    return min(d, 1.0 - d)


class Interval(Enum):
    """Position of a point in the three-interval decomposition."""

    NEGATIVE = "(-inf,0)"
    UNIT = "(0,1)"
    UPPER = "(1,inf)"
    ZERO = "0"
    ONE = "1"
    INFINITY = "inf"

    @property
    def is_boundary(self) -> bool:
        return self in (Interval.ZERO, Interval.ONE, Interval.INFINITY)


def classify(p: ProjPoint) -> Interval:
    """Interval tag of a point; boundary tags within the equality tolerance."""
    if chordal(p, INFINITY) <= POINT_TOL:
        return Interval.INFINITY
    if chordal(p, ZERO) <= POINT_TOL:
        return Interval.ZERO
    if chordal(p, ONE) <= POINT_TOL:
        return Interval.ONE
    if p.a < 0.0:
        return Interval.NEGATIVE
    if p.a < p.b:
        return Interval.UNIT
    return Interval.UPPER


def circle_cover(p: ProjPoint) -> CirclePoint:
    """Three-fold cover of the circle: 1/(1-x), x, 1 - 1/x on the branches.

    The three marked points 0, 1, infinity all map to 0 in R/Z.  Branch
    selection uses exact signs of the homogeneous pair (the stored b is
    nonnegative), so every division lands in (0, 1).
    """
    a, b = p.a, p.b
    if b == 0.0 or a == 0.0 or a == b:
        return CirclePoint(0.0)
    if a < 0.0:
        return CirclePoint(b / (b - a))
    if a < b:
        return CirclePoint(a / b)
    return CirclePoint((a - b) / a)


def cover_derivative(p: ProjPoint) -> float:
    """Derivative of the circle cover: (1-x)^-2, 1, x^-2 on the branches.

    Continuous across the seams (value 1 at 0 and 1, value 0 at
    infinity) and strictly positive on the reals.
    """
    a, b = p.a, p.b
    if b == 0.0:
        return 0.0
    if a == 0.0 or a == b:
        return 1.0
    if a < 0.0:
        r = b / (b - a)
        return r * r
    if a < b:
        return 1.0
    r = b / a
    return r * r


def cover_integral(order: int = 64) -> float:
    """Total integral of the cover derivative over the projective line.

    The two unbounded branches are substituted back into (0, 1): the
    negative branch by x = 1 - 1/u and the upper branch by x = 1/(1-u),
    leaving three bounded Gauss-Legendre quadratures.
    """
    nodes, weights = np.polynomial.legendre.leggauss(order)
    u = 0.5 * (nodes + 1.0)
    w = 0.5 * weights
    total = 0.0
    for ui, wi in zip(u, w):
        total += wi * cover_derivative(ProjPoint(ui, 1.0))
        total += wi * cover_derivative(ProjPoint(ui - 1.0, ui)) / (ui * ui)
        total += wi * cover_derivative(ProjPoint(1.0, 1.0 - ui)) / ((1.0 - ui) ** 2)
    return total


def logit(p: ProjPoint) -> ProjPoint:
    """Inverse of the logistic function 1/(1 + exp(-g)), extended to [0, 1].

    Computed as log a - log(b - a) on the homogeneous pair, so values
    exponentially close to the endpoints keep full precision.  The
    endpoints 0 and 1 map to the point at infinity.

    Raises DomainError for affine values outside [0, 1].
    """
    a, b = p.a, p.b
    if b == 0.0 or a < 0.0 or a > b:
        raise DomainError("logit needs an affine value in [0, 1]")
    if a == 0.0 or a == b:
        return INFINITY
    return ProjPoint.from_affine(math.log(a) - math.log(b - a))


def line_cover(p: ProjPoint) -> ProjPoint:
    """Logit of the circle cover: a three-fold cover of the line itself.

    Branch values are -log|x| on (-inf, 0), log(x/(1-x)) on (0, 1) and
    log(x - 1) on (1, inf), all computed on the homogeneous pair; the
    marked points 0, 1, infinity map to infinity.  Continuous as a map
    of pointed projective lines (the sign flips across a seam happen
    through the point at infinity).
    """
    a, b = p.a, p.b
    if b == 0.0 or a == 0.0 or a == b:
        return INFINITY
    if a < 0.0:
        return ProjPoint.from_affine(math.log(b) - math.log(-a))
    if a < b:
        return ProjPoint.from_affine(math.log(a) - math.log(b - a))
    return ProjPoint.from_affine(math.log(a - b) - math.log(b))


def devadoss_length(
    p0: ProjPoint, p1: ProjPoint, p2: ProjPoint, p3: ProjPoint
) -> ProjPoint:
    """Signed internal-edge length of the rooted tree on four boundary points.

    Equals the line cover of the cross-ratio; for cross-ratio r in (0, 1)
    this inverts r = 1/(1 + exp(-g)).  Infinite exactly when the
    cross-ratio is 0, 1 or infinity.
    """
    return line_cover(cross_ratio(p0, p1, p2, p3))


def winding_number(samples) -> int:
    """Winding number of the circle cover along a closed loop of points.

    The cover values are lifted continuously by wrapping consecutive
    differences into (-1/2, 1/2); the loop is closed from the last
    sample back to the first.  Raises LiftStepTooLarge when consecutive
    cover values are 1/4 or more apart.
    """
    ts = [circle_cover(p).t for p in samples]
    if len(ts) < 2:
        return 0
    total = 0.0
    for i in range(len(ts)):
        d = (ts[(i + 1) % len(ts)] - ts[i] + 0.5) % 1.0 - 0.5
        if abs(d) >= 0.25:
            raise LiftStepTooLarge(
                f"cover step {d:+.3f} between samples {i} and {(i + 1) % len(ts)}"
            )
        total += d
    return round(total)
