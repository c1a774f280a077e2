"""The two-distance function behind the four-point planar supremum.

Fix the unit triangle A1 = (0, 0), A2 = (1, 0), A3 = (1/2, sqrt(3)/2). The
fourth point (x, y) is confined to the bow region between the chord A2A3
and the unit arc about A1, and the quantity to maximise is::

    f(x, y) = |A3 A4| + |A2 A4|

This module evaluates f with its gradient and Hessian, scans the bow for
curvature sign and stationary points, maximises f on the boundary, and
handles the lens-and-arc reduction used when A1A2 is the diameter.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from ._parallel import pmap
from .errors import InvalidInputError, SingularityError
from .geometry import PointSet, functionals

SQRT3 = math.sqrt(3.0)
A1 = np.array([0.0, 0.0])
A2 = np.array([1.0, 0.0])
A3 = np.array([0.5, SQRT3 / 2.0])
BOUNDARY_SAMPLES = 10_000


def in_bow_region(x: float, y: float, tol: float = 1e-12) -> bool:
    """Membership in the bow; ``tol`` only relaxes the two closed constraints."""
    return (
        0.5 < x < 1.0
        and 0.0 < y < SQRT3 / 2.0
        and y + SQRT3 * x - SQRT3 >= -tol
        and x * x + y * y <= 1.0 + tol
    )


def in_lens_region(x: float, y: float, tol: float = 1e-12) -> bool:
    return x * x + y * y <= 1.0 + tol and (x - 1.0) ** 2 + y * y <= 1.0 + tol


def chord_distance(x, y):
    """Signed distance to the line through A2 and A3 (positive on the arc side)."""
    return (np.asarray(y) + SQRT3 * np.asarray(x) - SQRT3) / 2.0


def f_value(x, y):
    """f without derivatives; finite everywhere, including at A2 and A3."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    return np.hypot(x - A3[0], y - A3[1]) + np.hypot(x - A2[0], y - A2[1])


@dataclass(frozen=True)
class LandscapeProbe:
    x: float
    y: float
    f: float
    fx: float
    fy: float
    r: float
    s: float
    t: float
    curvature_indicator: float

    @property
    def gradient_norm(self) -> float:
        return math.hypot(self.fx, self.fy)


def _probe_arrays(x: np.ndarray, y: np.ndarray):
    """Vectorised closed forms: f, fx, fy, r, s, t, rt - s^2."""
    u3, v3 = x - A3[0], y - A3[1]
    u2, v2 = x - A2[0], y - A2[1]
    d3 = np.hypot(u3, v3)
    d2 = np.hypot(u2, v2)
    c3, c2 = d3**3, d2**3
    f = d3 + d2
    fx = u3 / d3 + u2 / d2
    fy = v3 / d3 + v2 / d2
    r = v3 * v3 / c3 + v2 * v2 / c2
    t = u3 * u3 / c3 + u2 * u2 / c2
    s = -(u3 * v3 / c3 + u2 * v2 / c2)
    return f, fx, fy, r, s, t, r * t - s * s


def probe(x: float, y: float) -> LandscapeProbe:
    """f, its gradient and second partials r, s, t at (x, y)."""
    x, y = float(x), float(y)
    if math.hypot(x - A3[0], y - A3[1]) == 0.0 or math.hypot(x - A2[0], y - A2[1]) == 0.0:
        raise SingularityError(f"f is not differentiable at ({x}, {y}): a distance vanishes")
    vals = _probe_arrays(np.array(x), np.array(y))
    return LandscapeProbe(x, y, *(float(v) for v in vals))


def bow_grid(resolution: float, exclusion_band: float = 0.0) -> Tuple[np.ndarray, np.ndarray]:
    """Points (1/2 + i h, j h) strictly inside the bow and farther than
    ``exclusion_band`` from the chord."""
    if resolution <= 0:
        raise InvalidInputError(f"resolution: must be positive, got {resolution}")
    xs = 0.5 + resolution * np.arange(1, int(math.ceil(0.5 / resolution)) + 1)
    ys = resolution * np.arange(1, int(math.ceil(SQRT3 / 2 / resolution)) + 1)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    keep = (
        (X < 1.0)
        & (Y < SQRT3 / 2.0)
        & (X * X + Y * Y < 1.0)
        & (chord_distance(X, Y) > max(exclusion_band, 0.0))
    )
    return X[keep], Y[keep]


@dataclass(frozen=True)
class ScanReport:
    quantity: str
    minimum: float
    argmin: Tuple[float, float]
    points: int
    extra: Optional[dict] = None

    def to_dict(self) -> dict:
        out = {
            "quantity": self.quantity,
            "min": self.minimum,
            "argmin": list(self.argmin),
            "points": self.points,
        }
        if self.extra:
            out.update(self.extra)
        return out


def _chunks(n: int, size: int = 50_000) -> List[slice]:
    return [slice(i, min(i + size, n)) for i in range(0, n, size)]


def _min_scan(values_of, X, Y, threads):
    """Min-reduce ``values_of(x, y)`` over chunks; first index wins ties."""
    def one(sl):
        v = values_of(X[sl], Y[sl])
        k = int(np.argmin(v))
        return float(v[k]), sl.start + k

    parts = pmap(one, _chunks(len(X)), threads)
    value, idx = min(parts, key=lambda p: (p[0], p[1]))
    return value, (float(X[idx]), float(Y[idx]))


def curvature_positive_on_grid(
    resolution: float = 1e-3, exclusion_band: float = 1e-3, threads: Optional[int] = None
) -> ScanReport:
    """Smallest rt - s^2 over the bow grid, chord band excluded."""
    X, Y = bow_grid(resolution, exclusion_band)
    value, where = _min_scan(lambda x, y: _probe_arrays(x, y)[6], X, Y, threads)
    return ScanReport("rt_minus_s2", value, where, len(X))


def eq2_residual(x, y):
    """(1 - x)(y - sqrt3/2) - (1/2 - x) y; zero exactly on the line A2A3."""
    return (1 - x) * (y - SQRT3 / 2) - (0.5 - x) * y


def eq3_sides(x, y):
    """Left and right sides of (1 - x)(y - sqrt3/2) = (x - 1/2) y."""
    return (1 - x) * (y - SQRT3 / 2), (x - 0.5) * y


def stationary_scan(
    resolution: float = 1e-3, exclusion_band: float = 1e-3, threads: Optional[int] = None
) -> ScanReport:
    """Smallest gradient norm over the bow grid.

    Also reports, over the same grid, how often the line condition (2) is
    closer to holding than the alternative (3), and the extreme values of
    the two sides of (3), whose signs rule it out inside the bow.
    """
    X, Y = bow_grid(resolution, exclusion_band)

    def grad_norm(x, y):
        _, fx, fy, *_ = _probe_arrays(x, y)
        return np.hypot(fx, fy)

    value, where = _min_scan(grad_norm, X, Y, threads)
    lhs3, rhs3 = eq3_sides(X, Y)
    res2 = np.abs(eq2_residual(X, Y))
    res3 = np.abs(lhs3 - rhs3)
    extra = {
        "eq2_closer_count": int(np.count_nonzero(res2 < res3)),
        "eq3_lhs_max": float(lhs3.max()),
        "eq3_rhs_min": float(rhs3.min()),
    }
    return ScanReport("gradient_norm", value, where, len(X), extra)


def write_scan_csv(path, resolution: float = 1e-3, exclusion_band: float = 1e-3) -> int:
    """Dump every probe on the bow grid; returns the number of rows."""
    X, Y = bow_grid(resolution, exclusion_band)
    cols = _probe_arrays(X, Y)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y", "f", "fx", "fy", "r", "s", "t", "rt_minus_s2"])
        for row in zip(X, Y, *cols):
            w.writerow([repr(float(v)) for v in row])
    return len(X)


def _refine_max(g, dg, lo: float, hi: float, samples: int) -> float:
    """Parameter of the maximum of ``g`` on [lo, hi].

    Dense sampling brackets the maximum; an interior bracket is refined by
    root-finding on the derivative ``dg``.
    """
    ts = np.linspace(lo, hi, samples)
    vals = np.array([g(t) for t in ts])
    k = int(np.argmax(vals))
    if k == 0 or k == samples - 1:
        return float(ts[k])
    a, b = ts[k - 1], ts[k + 1]
    da, db = dg(a), dg(b)
    if da > 0 > db:
        return float(brentq(dg, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps))
    return float(ts[k])


def _arc_point(theta: float) -> np.ndarray:
    return np.array([math.cos(theta), math.sin(theta)])


def boundary_maximize() -> Tuple[Tuple[float, float], float]:
    """Maximum of f on the boundary of the bow (chord plus unit arc)."""
    # f is identically 1 along the chord
    chord_t = np.linspace(0.0, 1.0, 101)
    chord_pts = A2 + np.outer(chord_t, A3 - A2)
    chord_vals = f_value(chord_pts[:, 0], chord_pts[:, 1])
    k = int(np.argmax(chord_vals))
    best_pt, best_val = chord_pts[k], float(chord_vals[k])

    def g(th):
        p = _arc_point(th)
        return float(f_value(p[0], p[1]))

    def dg(th):
        p = _arc_point(th)
        tangent = np.array([-math.sin(th), math.cos(th)])
        return float((p - A3) @ tangent / np.linalg.norm(p - A3) + (p - A2) @ tangent / np.linalg.norm(p - A2))

    th = _refine_max(g, dg, 0.0, math.pi / 3.0, BOUNDARY_SAMPLES)
    val = g(th)
    if val > best_val:
        best_pt, best_val = _arc_point(th), val
    return (float(best_pt[0]), float(best_pt[1])), best_val


@dataclass(frozen=True)
class Arc:
    """The circle (x - 1/2)^2 + (y - b)^2 = radius^2."""

    b: float
    radius: float

    def __post_init__(self):
        if not (self.radius > 0 and math.isfinite(self.radius) and math.isfinite(self.b)):
            raise InvalidInputError(f"arc: need finite b and positive radius, got {self}")

    def point(self, phi):
        """Point at angle ``phi`` measured from the top of the circle."""
        phi = np.asarray(phi, dtype=float)
        return np.stack([0.5 + self.radius * np.sin(phi), self.b + self.radius * np.cos(phi)], axis=-1)


def chord_sum(p) -> np.ndarray:
    """|A1 P| + |A2 P| with A1 = (0, 0), A2 = (1, 0)."""
    p = np.asarray(p, dtype=float)
    return np.hypot(p[..., 0], p[..., 1]) + np.hypot(p[..., 0] - 1.0, p[..., 1])


@dataclass(frozen=True)
class ArcMax:
    argmax: Tuple[float, float]
    value: float
    L: float  # 2 (|A1P|^2 + |A2P|^2) at the argmax


def _feasible_runs(mask: np.ndarray) -> List[Tuple[int, int]]:
    """Maximal runs of True in a circular boolean array, as (start, length)."""
    n = len(mask)
    if mask.all():
        return [(0, n)]
    start = int(np.argmin(mask))  # an infeasible index; runs cannot wrap past it
    rolled = np.roll(mask, -start)
    runs, i = [], 0
    while i < n:
        if rolled[i]:
            j = i
            while j < n and rolled[j]:
                j += 1
            runs.append(((start + i) % n, j - i))
            i = j
        else:
            i += 1
    return runs


def arc_chord_sum_max(arc: Arc, side: int = 1, samples: int = 20_000) -> ArcMax:
    """Maximise |A1 P| + |A2 P| over the part of ``arc`` inside the lens.

    Only points with ``sign(y) == side`` are considered. Raises
    :class:`InvalidInputError` if that sub-arc is empty.
    """
    if side not in (1, -1):
        raise InvalidInputError(f"side: must be +1 or -1, got {side}")

    def feasible(phi):
        p = arc.point(phi)
        x, y = p[..., 0], p[..., 1]
        return (side * y > 0) & (x * x + y * y <= 1.0) & ((x - 1.0) ** 2 + y * y <= 1.0)

    step = 2 * math.pi / samples
    phis = -math.pi + step * np.arange(samples)
    runs = _feasible_runs(feasible(phis))
    if not runs:
        raise InvalidInputError(f"arc {arc} has no points inside the lens on side {side}")

    def edge(inside: float, outside: float) -> float:
        for _ in range(80):
            mid = 0.5 * (inside + outside)
            if feasible(mid):
                inside = mid
            else:
                outside = mid
        return inside

    def g(phi):
        return float(chord_sum(arc.point(phi)))

    def dg(phi):
        p = arc.point(phi)
        tangent = arc.radius * np.array([math.cos(phi), -math.sin(phi)])
        return float(p @ tangent / np.linalg.norm(p) + (p - A2) @ tangent / np.linalg.norm(p - A2))

    best_phi, best_val = None, -math.inf
    for start, length in runs:
        if length == samples:
            lo, hi = -math.pi, math.pi
        else:
            lo = edge(phis[start], phis[start] - step)
            hi = edge(phis[start] + (length - 1) * step, phis[start] + length * step)
        phi = _refine_max(g, dg, lo, hi, max(201, min(length * 4, 4001)))
        val = g(phi)
        if val > best_val:
            best_phi, best_val = phi, val
    p = arc.point(best_phi)
    L = 2.0 * (float(p @ p) + float((p - A2) @ (p - A2)))
    return ArcMax((float(p[0]), float(p[1])), best_val, L)


def midnormal_pair_value(y1: float, y2: float) -> float:
    """omega of {(0,0), (1,0), (1/2, y1), (1/2, y2)} with |y1 - y2| = 1."""
    if abs(abs(y1 - y2) - 1.0) > 1e-12:
        raise InvalidInputError(f"|y1 - y2| must be 1, got {abs(y1 - y2)!r}")
    lim = SQRT3 / 2.0 + 1e-12
    if abs(y1) > lim or abs(y2) > lim:
        raise InvalidInputError("both points must lie in the closed lens (|y| <= sqrt(3)/2)")
    ps = PointSet(2, [[0.0, 0.0], [1.0, 0.0], [0.5, y1], [0.5, y2]])
    return functionals(ps).omega


def sample_bow_interior(
    rng: np.random.Generator, count: int, band: float = 0.0, pole_margin: float = 0.0
) -> np.ndarray:
    """Uniform points from the open bow, by rejection from its bounding box.

    Points within ``band`` of the chord or within ``pole_margin`` of A2 or
    A3 (where f is not differentiable) are rejected.
    """
    out = np.empty((0, 2))
    while len(out) < count:
        cand = np.column_stack([rng.uniform(0.5, 1.0, 4 * count), rng.uniform(0.0, SQRT3 / 2, 4 * count)])
        x, y = cand[:, 0], cand[:, 1]
        keep = (
            (chord_distance(x, y) > band)
            & (x * x + y * y < 1.0)
            & (np.hypot(x - A2[0], y - A2[1]) > pole_margin)
            & (np.hypot(x - A3[0], y - A3[1]) > pole_margin)
        )
        out = np.vstack([out, cand[keep]])
    return out[:count]


def finite_difference_errors(points: np.ndarray, h: float = 1e-5) -> Tuple[float, float]:
    """Largest absolute gaps between closed forms and central differences.

    The gradient is compared with differences of f, the second partials
    with differences of the closed-form gradient.
    """
    x, y = points[:, 0], points[:, 1]
    _, fx, fy, r, s, t, _ = _probe_arrays(x, y)
    fd_fx = (f_value(x + h, y) - f_value(x - h, y)) / (2 * h)
    fd_fy = (f_value(x, y + h) - f_value(x, y - h)) / (2 * h)
    _, gx_p, gy_p, *_ = _probe_arrays(x + h, y)
    _, gx_m, gy_m, *_ = _probe_arrays(x - h, y)
    _, hx_p, hy_p, *_ = _probe_arrays(x, y + h)
    _, hx_m, hy_m, *_ = _probe_arrays(x, y - h)
    fd_r = (gx_p - gx_m) / (2 * h)
    fd_t = (hy_p - hy_m) / (2 * h)
    fd_s = 0.5 * ((gy_p - gy_m) / (2 * h) + (hx_p - hx_m) / (2 * h))
    grad_err = max(np.abs(fx - fd_fx).max(), np.abs(fy - fd_fy).max())
    hess_err = max(np.abs(r - fd_r).max(), np.abs(s - fd_s).max(), np.abs(t - fd_t).max())
    return float(grad_err), float(hess_err)


def random_admissible_arcs(rng: np.random.Generator, count: int) -> List[Arc]:
    """Arcs centred on the midnormal at or above the diameter, whose top
    point lies inside the lens."""
    arcs = []
    for _ in range(count):
        b = rng.uniform(0.0, 0.8)
        radius = rng.uniform(0.02, SQRT3 / 2.0 - b)
        arcs.append(Arc(float(b), float(radius)))
    return arcs
