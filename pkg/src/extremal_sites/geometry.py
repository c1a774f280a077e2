"""Point sets and the distance functionals sigma, D, d, omega and mu.

For a finite set S of n points in E^m::

    sigma(S) = sum of all pairwise distances
    D(S)     = largest pairwise distance (diameter)
    d(S)     = smallest pairwise distance
    omega    = sigma / D
    mu       = sigma / d
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Any, Optional, Sequence

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import DegenerateError, InvalidInputError


@dataclass(frozen=True)
class PointSet:
    """An ordered, immutable set of points in E^dim.

    ``points`` is stored as a read-only ``(n, dim)`` float array.
    """

    dim: int
    points: np.ndarray

    def __post_init__(self):
        if isinstance(self.dim, bool) or not isinstance(self.dim, (int, np.integer)) or self.dim < 1:
            raise InvalidInputError(f"dim: expected a positive integer, got {self.dim!r}")
        try:
            arr = np.array(self.points, dtype=float)
        except (TypeError, ValueError) as exc:
            raise InvalidInputError(f"points: not a numeric array ({exc})") from None
        if arr.ndim != 2 or arr.shape[1] != self.dim:
            raise InvalidInputError(
                f"points: every point must have exactly {self.dim} coordinates, got shape {arr.shape}"
            )
        if arr.shape[0] < 2:
            raise InvalidInputError(f"points: need at least 2 points, got {arr.shape[0]}")
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("points: all coordinates must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "points", arr)

    @classmethod
    def from_array(cls, points) -> "PointSet":
        arr = np.asarray(points, dtype=float)
        if arr.ndim != 2:
            raise InvalidInputError(f"points: expected a 2-d array, got shape {arr.shape}")
        return cls(arr.shape[1], arr)

    def __len__(self) -> int:
        return self.points.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.points, other.points)

    def __hash__(self) -> int:
        return hash((self.dim, self.points.tobytes()))

    def to_dict(self) -> dict:
        return {"dim": self.dim, "points": self.points.tolist()}

    @classmethod
    def from_dict(cls, data: Any) -> "PointSet":
        if not isinstance(data, dict):
            raise InvalidInputError("point set JSON must be an object with 'dim' and 'points'")
        for key in ("dim", "points"):
            if key not in data:
                raise InvalidInputError(f"{key}: missing field")
        dim, points = data["dim"], data["points"]
        if isinstance(dim, bool) or not isinstance(dim, int):
            raise InvalidInputError(f"dim: expected an integer, got {dim!r}")
        if not isinstance(points, list) or not all(isinstance(p, list) for p in points):
            raise InvalidInputError("points: expected a list of coordinate lists")
        for i, p in enumerate(points):
            if len(p) != dim:
                raise InvalidInputError(f"points[{i}]: expected {dim} coordinates, got {len(p)}")
            if not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in p):
                raise InvalidInputError(f"points[{i}]: coordinates must be numbers")
        return cls(dim, points)

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "PointSet":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"malformed JSON: {exc}") from None
        return cls.from_dict(data)


@dataclass(frozen=True)
class DistanceSummary:
    sigma: float
    dmax: float
    dmin: float
    omega: float
    mu: Optional[float]  # None when two points coincide

    def to_dict(self) -> dict:
        return {
            "sigma": self.sigma,
            "dmax": self.dmax,
            "dmin": self.dmin,
            "omega": self.omega,
            "mu": self.mu,
        }


def as_point_set(ps) -> PointSet:
    """Accept a PointSet or anything array-like of shape (n, m)."""
    if isinstance(ps, PointSet):
        return ps
    return PointSet.from_array(ps)


def distance_matrix(ps) -> np.ndarray:
    """Symmetric matrix of pairwise Euclidean distances."""
    ps = as_point_set(ps)
    return squareform(pdist(ps.points))


def functionals(ps) -> DistanceSummary:
    """Compute sigma, D, d, omega and mu for a point set.

    ``mu`` is ``None`` if any two points coincide. Raises
    :class:`DegenerateError` if every point coincides (D = 0).
    """
    ps = as_point_set(ps)
    dists = pdist(ps.points)
    dmax = float(dists.max())
    if dmax == 0.0:
        raise DegenerateError("all points coincide: diameter is zero")
    sigma = float(dists.sum())
    dmin = float(dists.min())
    mu = sigma / dmin if dmin > 0.0 else None
    return DistanceSummary(sigma=sigma, dmax=dmax, dmin=dmin, omega=sigma / dmax, mu=mu)


def omega(points: np.ndarray) -> float:
    """sigma/D of a raw ``(n, m)`` array, without validation (hot path)."""
    dists = pdist(points)
    return float(dists.sum() / dists.max())


def normalize_diameter(ps) -> PointSet:
    """Scale ``ps`` about its centroid so its diameter is exactly 1."""
    ps = as_point_set(ps)
    dmax = pdist(ps.points).max()
    if dmax == 0.0:
        raise DegenerateError("all points coincide: cannot normalize diameter")
    centroid = ps.points.mean(axis=0)
    return PointSet(ps.dim, centroid + (ps.points - centroid) / dmax)


def _require_planar(ps: PointSet) -> None:
    if ps.dim != 2:
        raise InvalidInputError(f"dim: planar predicate needs dim = 2, got {ps.dim}")


def orient2d(a: Sequence[float], b: Sequence[float], c: Sequence[float]) -> float:
    """Twice the signed area of triangle abc (positive when counter-clockwise)."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def collinear_triple_exists(ps, tol: float = 1e-12) -> bool:
    """True iff some triple is (nearly) collinear.

    A triple counts as collinear when its area is at most ``tol`` times the
    product of its two longest sides, which makes the test scale invariant.
    """
    ps = as_point_set(ps)
    _require_planar(ps)
    if tol < 0:
        raise InvalidInputError(f"tol: must be nonnegative, got {tol}")
    pts = ps.points
    for i, j, k in itertools.combinations(range(len(ps)), 3):
        a, b, c = pts[i], pts[j], pts[k]
        area = abs(orient2d(a, b, c)) / 2.0
        sides = sorted((math.dist(a, b), math.dist(b, c), math.dist(a, c)))
        if area <= tol * sides[1] * sides[2]:
            return True
    return False


def is_convex_position_4(ps, tol: float = 1e-12) -> bool:
    """True iff none of the four points lies inside the triangle of the others.

    Raises :class:`DegenerateError` if a collinear triple is present; that
    case has to be handled separately by the caller.
    """
    ps = as_point_set(ps)
    _require_planar(ps)
    if len(ps) != 4:
        raise InvalidInputError(f"points: expected exactly 4 points, got {len(ps)}")
    if collinear_triple_exists(ps, tol):
        raise DegenerateError("collinear triple present; convex position is not defined")
    pts = ps.points
    for k in range(4):
        a, b, c = (pts[i] for i in range(4) if i != k)
        p = pts[k]
        s1, s2, s3 = orient2d(a, b, p), orient2d(b, c, p), orient2d(c, a, p)
        if (s1 > 0 and s2 > 0 and s3 > 0) or (s1 < 0 and s2 < 0 and s3 < 0):
            return False
    return True


def load_point_set(path) -> PointSet:
    with open(path, encoding="utf-8") as fh:
        return PointSet.from_json(fh.read())


def dump_json(data: Any, path) -> None:
    """Write ``data`` as deterministic, human-readable JSON."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=False)
        fh.write("\n")



def congruence_residual(a, b) -> float:
    """How far two labelled-up-to-permutation point sets are from congruent.

    Returns the smallest, over relabellings of ``b``, of the largest absolute
    difference between corresponding pairwise distances. Zero means the sets
    are congruent (equal up to rigid motion and reflection).
    """
    a, b = as_point_set(a), as_point_set(b)
    if len(a) != len(b):
        raise InvalidInputError("point sets have different sizes")
    da, db = distance_matrix(a), distance_matrix(b)
    best = math.inf
    for perm in itertools.permutations(range(len(b))):
        p = list(perm)
        best = min(best, float(np.abs(da - db[np.ix_(p, p)]).max()))
    return best
