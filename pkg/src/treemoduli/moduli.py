"""Moduli of marked points on the line and the averaged pullback metric.

A configuration is a tuple (x_0, ..., x_n) of points of the projective
line with x_0 as root, taken up to Mobius equivalence.  Fixing the gauge
(x_0, x_{n-1}, x_n) -> (0, 1, infinity) identifies the open stratum
with charts u = (u_1, ..., u_{n-2}).  Each triple S = {i < j < k} of
leaf labels contributes a circle coordinate, the cover value of the
cross-ratio of (x_0, x_i, x_j, x_k); their product over all triples is
the Albanese map, and the average of the squared differentials is a
continuous, piecewise smooth metric on which leaf relabelings act by
isometries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .cover import CirclePoint, circle_cover
from .projline import (
    INFINITY,
    ONE,
    POINT_TOL,
    ZERO,
    MobiusMap,
    ProjPoint,
    chordal,
    cross_ratio,
    frame_map,
)

__all__ = [
    "Configuration",
    "ChartPoint",
    "triples",
    "check_triple",
    "chart_coords",
    "chart_embed",
    "forgetful",
    "triple_coord",
    "albanese",
    "albanese_jacobian",
    "jacobian_rank",
    "metric_matrix",
    "metric_eval",
    "relabel",
    "curve_length",
    "regauged_sigma_ratios",
    "rank_scan",
    "BadIndex",
    "InvalidChart",
    "SeamTooClose",
    "NotAPermutation",
    "DimensionMismatch",
    "NonFiniteEntry",
]


class BadIndex(ValueError):
    """Triple index out of range or not strictly increasing."""


class InvalidChart(ArithmeticError):
    """Chart coordinates coincide with each other or with the gauge points."""


class SeamTooClose(ArithmeticError):
    """A finite-difference stencil would straddle a seam of the cover."""


class NotAPermutation(ValueError):
    """Relabeling sequence is not a permutation of 1..n."""


class DimensionMismatch(ValueError):
    """Vector length does not match the chart dimension."""


class NonFiniteEntry(ValueError):
    """Matrix contains NaN or infinite entries."""


@dataclass(frozen=True)
class Configuration:
    """Ordered marked points (x_0, ..., x_n) with the root at index 0."""

    points: tuple[ProjPoint, ...]

    def __post_init__(self):
        pts = tuple(self.points)
        if len(pts) < 4:
            raise ValueError("a configuration needs n >= 3, i.e. at least 4 points")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return len(self.points) - 1

    def min_separation(self) -> float:
        """Smallest pairwise chordal distance; 0 on boundary strata."""
        pts = self.points
        return min(
            chordal(pts[i], pts[j])
            for i in range(len(pts))
            for j in range(i + 1, len(pts))
        )

    def in_open_stratum(self, tol: float = POINT_TOL) -> bool:
        return self.min_separation() > tol

    def transform(self, m: MobiusMap) -> "Configuration":
        return Configuration(tuple(m(p) for p in self.points))

    def to_json(self) -> dict:
        return {"n": self.n, "points": [p.to_json() for p in self.points]}

    @classmethod
    def from_json(cls, obj: dict) -> "Configuration":
        pts = tuple(ProjPoint.from_json(v) for v in obj["points"])
        cfg = cls(pts)
        if "n" in obj and int(obj["n"]) != cfg.n:
            raise ValueError(f"n = {obj['n']} does not match {len(pts)} points")
        return cfg


@dataclass(frozen=True)
class ChartPoint:
    """Gauge-fixed coordinates: affine positions of x_1..x_{n-2}."""

    u: tuple[float, ...]

    def __post_init__(self):
        u = tuple(float(v) for v in self.u)
        if not u:
            raise ValueError("chart needs at least one coordinate (n >= 3)")
        if not all(math.isfinite(v) for v in u):
            raise InvalidChart("chart coordinates must be finite")
        object.__setattr__(self, "u", u)

    @property
    def n(self) -> int:
        return len(self.u) + 2

    def as_array(self) -> np.ndarray:
        return np.asarray(self.u, dtype=float)


def triples(n: int) -> list[tuple[int, int, int]]:
    """All 3-element subsets of {1..n} in lexicographic order."""
    return list(combinations(range(1, n + 1), 3))


def check_triple(s: tuple[int, int, int], n: int) -> tuple[int, int, int]:
    i, j, k = (int(v) for v in s)
    if not (1 <= i < j < k <= n):
        raise BadIndex(f"{(i, j, k)} is not an increasing triple in 1..{n}")
    return (i, j, k)


def chart_coords(c: Configuration) -> ChartPoint:
    """Chart of a configuration in the gauge (x_0, x_{n-1}, x_n) -> (0, 1, inf).

    Each coordinate is a cross-ratio, so Mobius-equivalent configurations
    give equal charts.  Raises DegenerateAnchor when the gauge points
    coincide and InvalidChart when some x_i sits at the infinity anchor.
    """
    pts = c.points
    m = frame_map(pts[0], pts[-2], pts[-1])
    u = []
    for p in pts[1:-2]:
        q = m(p)
        if q.is_infinite:
            raise InvalidChart("marked point coincides with the infinity anchor")
        u.append(q.affine)
    return ChartPoint(tuple(u))


def chart_embed(u: ChartPoint) -> Configuration:
    """Configuration (0, u_1, ..., u_{n-2}, 1, infinity) of a chart.

    Left inverse of chart_coords.  Raises InvalidChart when coordinates
    collide with each other or with the gauge values 0 and 1.
    """
    pts = [ZERO] + [ProjPoint.from_affine(v) for v in u.u] + [ONE, INFINITY]
    for i in range(1, len(pts) - 1):
        for j in range(i + 1, len(pts) - 1):
            if chordal(pts[i], pts[j]) <= POINT_TOL:
                raise InvalidChart(f"chart coordinates {i}, {j} coincide")
        if chordal(pts[i], ZERO) <= POINT_TOL:
            raise InvalidChart(f"chart coordinate {i} coincides with 0")
    return Configuration(tuple(pts))


def forgetful(c: Configuration, s: tuple[int, int, int]) -> tuple[ProjPoint, ...]:
    """Quadruple (x_0, x_i, x_j, x_k): root retained, other leaves forgotten."""
    i, j, k = check_triple(s, c.n)
    pts = c.points
    return (pts[0], pts[i], pts[j], pts[k])


def triple_coord(c: Configuration, s: tuple[int, int, int]) -> CirclePoint:
    """Circle coordinate of a triple: cover value of its cross-ratio.

    Continuous up to the boundary; collision quadruples land at
    0 in R/Z.
    """
    return circle_cover(cross_ratio(*forgetful(c, s)))


def albanese(c: Configuration) -> list[CirclePoint]:
    """All triple coordinates, in lexicographic triple order."""
    return [triple_coord(c, s) for s in triples(c.n)]


# -- fast chart-side evaluation ------------------------------------------

def _triple_arrays(n: int) -> tuple[np.ndarray, np.ndarray]:
    t = np.asarray(triples(n), dtype=int)
    return t, (t[:, 2] == n)


def _marked_values(u: np.ndarray) -> np.ndarray:
    """Affine positions of x_1..x_{n-1} in the standard gauge."""
    return np.concatenate([u, [1.0]])


def _chart_ratios(u: np.ndarray, trip: np.ndarray, at_inf: np.ndarray) -> np.ndarray:
    """Cross-ratios of all triples at a chart, as affine values.

    For k < n the value is pi (pj - pk) / (pj (pi - pk)); triples whose
    last index is the infinity anchor reduce to pi / pj.
    """
    vals = _marked_values(u)
    pi = vals[trip[:, 0] - 1]
    pj = vals[trip[:, 1] - 1]
    rho = np.empty(len(trip))
    rho[at_inf] = pi[at_inf] / pj[at_inf]
    fin = ~at_inf
    if fin.any():
        pk = vals[trip[fin, 2] - 1]
        rho[fin] = (pi[fin] * (pj[fin] - pk)) / (pj[fin] * (pi[fin] - pk))
    return rho


def _cover_values(rho: np.ndarray) -> np.ndarray:
    t = np.empty_like(rho)
    neg = rho < 0.0
    mid = (rho >= 0.0) & (rho <= 1.0)
    up = rho > 1.0
    t[neg] = 1.0 / (1.0 - rho[neg])
    t[mid] = rho[mid]
    t[up] = 1.0 - 1.0 / rho[up]
    return t


def _cover_derivs(rho: np.ndarray) -> np.ndarray:
    d = np.ones_like(rho)
    neg = rho < 0.0
    up = rho > 1.0
    d[neg] = (1.0 - rho[neg]) ** -2
    d[up] = rho[up] ** -2
    return d


def _seam_margin(rho: np.ndarray) -> float:
    """Smallest chordal distance from any triple ratio to {0, 1, infinity}."""
    s = np.hypot(rho, 1.0)
    d0 = np.abs(rho) / s
    d1 = np.abs(rho - 1.0) / (s * math.sqrt(2.0))
    dinf = 1.0 / s
    return float(np.min(np.minimum(np.minimum(d0, d1), dinf)))


def _wrap(d: np.ndarray) -> np.ndarray:
    return (d + 0.5) % 1.0 - 0.5


def albanese_jacobian(
    u: ChartPoint, h: float = 1e-6, method: str = "central"
) -> np.ndarray:
    """Jacobian of the circle-lifted triple coordinates at a chart.

    Entry (S, m) approximates the partial derivative of the coordinate
    of triple S with respect to u_m.  "central" takes symmetric
    finite differences of the cover values, wrapping each difference
    into the lift nearest the base value; "analytic" uses the chain
    rule through the cover derivative and the cross-ratio gradient.

    Raises SeamTooClose when some triple ratio is within 10 h (chordal)
    of a marked point, where the stencil could straddle a seam.
    """
    h = float(h)
    trip, at_inf = _triple_arrays(u.n)
    base = u.as_array()
    rho0 = _chart_ratios(base, trip, at_inf)
    margin = _seam_margin(rho0)
    if margin <= 10.0 * h:
        raise SeamTooClose(f"seam margin {margin:.3e} <= 10 h = {10 * h:.3e}")
    dim = len(base)
    jac = np.empty((len(trip), dim))
    if method == "central":
        for m in range(dim):
            up_ = base.copy()
            dn = base.copy()
            up_[m] += h
            dn[m] -= h
            tp = _cover_values(_chart_ratios(up_, trip, at_inf))
            tm = _cover_values(_chart_ratios(dn, trip, at_inf))
            jac[:, m] = _wrap(tp - tm) / (2.0 * h)
        return jac
    if method == "analytic":
        kprime = _cover_derivs(rho0)
        vals = _marked_values(base)
        pi = vals[trip[:, 0] - 1]
        pj = vals[trip[:, 1] - 1]
        pk = np.where(at_inf, np.nan, vals[np.minimum(trip[:, 2], u.n - 1) - 1])
        for m in range(dim):
            label = m + 1
            drho = np.zeros(len(trip))
            for slot in range(3):
                sel = trip[:, slot] == label
                if not sel.any():
                    continue
                a, b, c = pi[sel], pj[sel], pk[sel]
                inf_sel = at_inf[sel]
                if slot == 0:
                    g = np.where(inf_sel, 1.0 / b, -c * (b - c) / (b * (a - c) ** 2))
                elif slot == 1:
                    g = np.where(inf_sel, -a / b**2, a * c / (b**2 * (a - c)))
                else:
                    # slot 2 with k = n is the infinity anchor, never a coordinate
                    g = a * (b - a) / (b * (a - c) ** 2)
                drho[sel] = g
            jac[:, m] = kprime * drho
        return jac
    raise ValueError(f"unknown method {method!r}")


def jacobian_rank(jac: np.ndarray, tol: float = 1e-6) -> int:
    """Number of singular values above tol times the largest."""
    jac = np.asarray(jac, dtype=float)
    if not np.isfinite(jac).all():
        raise NonFiniteEntry("jacobian contains non-finite entries")
    s = np.linalg.svd(jac, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def metric_matrix(u: ChartPoint, h: float = 1e-6) -> np.ndarray:
    """Averaged pullback metric J^T J / C(n,3) in chart coordinates.

    Exactly the average over triples of the squared coordinate
    differentials; symmetric positive semidefinite by construction.
    """
    jac = albanese_jacobian(u, h)
    g = jac.T @ jac / float(len(jac))
    return 0.5 * (g + g.T)


def metric_eval(u: ChartPoint, v, w, h: float = 1e-6) -> float:
    """Bilinear evaluation v^T G(u) w of the averaged metric."""
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    dim = u.n - 2
    if v.shape != (dim,) or w.shape != (dim,):
        raise DimensionMismatch(f"tangent vectors must have length {dim}")
    return float(v @ metric_matrix(u, h) @ w)


def relabel(perm, c: Configuration) -> Configuration:
    """Relabel leaves by a permutation of 1..n; the root stays put.

    perm[i-1] is the new label of leaf i.
    """
    n = c.n
    perm = [int(v) for v in perm]
    if sorted(perm) != list(range(1, n + 1)):
        raise NotAPermutation(f"{perm} is not a permutation of 1..{n}")
    pts: list[ProjPoint | None] = [None] * (n + 1)
    pts[0] = c.points[0]
    for i, target in enumerate(perm, start=1):
        pts[target] = c.points[i]
    return Configuration(tuple(pts))


def curve_length(samples, h: float = 1e-6, max_splits: int = 12) -> float:
    """Length of a piecewise linear chart path under the averaged metric.

    Composite rule: each segment contributes sqrt(du^T G(mid) du).
    Segments whose midpoint is too close to a seam are bisected; at the
    split-depth cap the metric is evaluated one-sidedly at the first
    interior point of the piece with enough seam margin.
    """
    pts = [s.as_array() if isinstance(s, ChartPoint) else np.asarray(s, float) for s in samples]
    if len(pts) < 2:
        raise ValueError("curve needs at least two samples")
    dims = {len(p) for p in pts}
    if len(dims) != 1:
        raise DimensionMismatch("samples must share one chart dimension")

    def seg(a: np.ndarray, b: np.ndarray, depth: int) -> float:
        du = b - a
        if not du.any():
            return 0.0
        mid = 0.5 * (a + b)
        try:
            g = metric_matrix(ChartPoint(tuple(mid)), h)
        except SeamTooClose:
            if depth > 0:
                return seg(a, mid, depth - 1) + seg(mid, b, depth - 1)
            for f in (0.25, 0.75, 0.1, 0.9, 0.0, 1.0):
                try:
                    g = metric_matrix(ChartPoint(tuple(a + f * du)), h)
                    break
                except SeamTooClose:
                    continue
            else:
                raise
        return math.sqrt(max(float(du @ g @ du), 0.0))

    return sum(seg(pts[i], pts[i + 1], max_splits) for i in range(len(pts) - 1))


def regauged_sigma_ratios(u: ChartPoint, h: float = 1e-6) -> list[float]:
    """Sigma ratios of the same moduli point read in alternative gauges.

    The ratio of smallest to largest singular value of the Jacobian is
    chart-dependent: a coordinate drawn near the tangent pole stretches
    one column and can push the ratio below a relative rank tolerance
    even where the differential is injective.  This helper re-reads the
    point with each leaf swapped into the infinity anchor slot and
    returns the observed ratios (the identity gauge first), so a flagged
    chart can be checked for being a scaling artifact.
    """
    n = u.n
    ratios = []
    base = chart_embed(u)
    for m in range(0, n + 1):
        try:
            if m == 0:
                chart = u
            else:
                perm = list(range(1, n + 1))
                perm[m - 1], perm[n - 1] = perm[n - 1], perm[m - 1]
                chart = chart_coords(relabel(perm, base))
            s = np.linalg.svd(albanese_jacobian(chart, h), compute_uv=False)
        except (SeamTooClose, InvalidChart):
            continue
        if s[0] > 0.0:
            ratios.append(float(s[-1] / s[0]))
    return ratios


def rank_scan(
    n: int,
    trials: int,
    seed: int = 0,
    h: float = 1e-6,
    tol: float = 1e-6,
    reject_cap: int = 1000,
) -> dict:
    """Random probe of the Albanese differential rank at desk scale.

    Draws chart coordinates i.i.d. from the circle's round measure
    pushed to the line (tan of a uniform angle), rejecting draws whose
    seam margin is at most 10 h, and reports how often the Jacobian has
    full rank n - 2.  The per-trial random streams are derived from
    (seed, trial), so the report is reproducible and order-independent.
    """
    n = int(n)
    trials = int(trials)
    if not 3 <= n <= 8:
        raise ValueError("rank_scan supports 3 <= n <= 8")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    trip, at_inf = _triple_arrays(n)
    dim = n - 2
    full = 0
    min_rank = dim
    worst_ratio = math.inf
    counterexample = None
    for k in range(trials):
        rng = np.random.default_rng([int(seed), k])
        for _ in range(reject_cap):
            t = rng.random(dim)
            u = np.tan(np.pi * (t + 0.25))
            if np.isfinite(u).all() and _seam_margin(
                _chart_ratios(u, trip, at_inf)
            ) > 10.0 * h:
                break
        else:
            raise RuntimeError(f"trial {k}: no open-stratum draw in {reject_cap} tries")
        chart = ChartPoint(tuple(u))
        jac = albanese_jacobian(chart, h)
        s = np.linalg.svd(jac, compute_uv=False)
        rank = int(np.sum(s > tol * s[0])) if s[0] > 0.0 else 0
        ratio = float(s[-1] / s[0]) if s[0] > 0.0 else 0.0
        if rank == dim:
            full += 1
        elif counterexample is None:
            counterexample = [float(v) for v in u]
        min_rank = min(min_rank, rank)
        worst_ratio = min(worst_ratio, ratio)
    return {
        "n": n,
        "trials": trials,
        "seed": int(seed),
        "h": float(h),
        "tol": float(tol),
        "full_rank_count": full,
        "min_rank": min_rank,
        "worst_sigma_ratio": worst_ratio,
        "counterexample": counterexample,
    }
