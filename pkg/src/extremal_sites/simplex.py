"""Distance-sum bound for points inside a simplex.

For a simplex with vertices A_1..A_{n+1} and any point P inside it::

    sum_i |P A_i|  <=  max_i sum_{j != i} |A_i A_j|

The right-hand side is the largest total length of the edges meeting at one
vertex. This module evaluates both sides and checks the inequality on
randomly sampled simplices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.spatial.distance import pdist, squareform

from ._parallel import pmap
from .errors import DegenerateError, InvalidInputError

VOLUME_RTOL = 1e-10
MAX_REJECTIONS = 1000


def simplex_volume(vertices: np.ndarray) -> float:
    """Volume of the simplex spanned by ``vertices`` (Gram determinant)."""
    edges = vertices[1:] - vertices[0]
    n = edges.shape[0]
    gram = edges @ edges.T
    det = max(float(np.linalg.det(gram)), 0.0)
    return math.sqrt(det) / math.factorial(n)


def _is_degenerate(vertices: np.ndarray) -> bool:
    scale = pdist(vertices).max()
    if scale == 0.0:
        return True
    return simplex_volume(vertices) < VOLUME_RTOL * scale ** (vertices.shape[0] - 1)


@dataclass(frozen=True)
class Simplex:
    """``dim + 1`` affinely independent vertices in E^dim."""

    dim: int
    vertices: np.ndarray

    def __post_init__(self):
        if isinstance(self.dim, bool) or not isinstance(self.dim, (int, np.integer)) or self.dim < 1:
            raise InvalidInputError(f"dim: expected a positive integer, got {self.dim!r}")
        v = np.array(self.vertices, dtype=float)
        if v.shape != (self.dim + 1, self.dim):
            raise InvalidInputError(
                f"vertices: expected shape ({self.dim + 1}, {self.dim}), got {v.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise InvalidInputError("vertices: all coordinates must be finite")
        if _is_degenerate(v):
            raise DegenerateError("simplex is degenerate (vertices are not affinely independent)")
        v.setflags(write=False)
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "vertices", v)

    @classmethod
    def from_array(cls, vertices) -> "Simplex":
        v = np.asarray(vertices, dtype=float)
        if v.ndim != 2:
            raise InvalidInputError(f"vertices: expected a 2-d array, got shape {v.shape}")
        return cls(v.shape[1], v)

    def to_dict(self) -> dict:
        return {"dim": self.dim, "vertices": self.vertices.tolist()}


@dataclass(frozen=True)
class LemmaCheck:
    lhs: float
    rhs: float
    slack: float
    holds: bool


def vertex_edge_sums(s: Simplex) -> np.ndarray:
    """Total length of the edges incident to each vertex."""
    return squareform(pdist(s.vertices)).sum(axis=1)


def vertex_edge_sum_bound(s: Simplex) -> float:
    return float(vertex_edge_sums(s).max())


def point_vertex_distance_sum(s: Simplex, p) -> float:
    p = np.asarray(p, dtype=float)
    if p.shape != (s.dim,):
        raise InvalidInputError(f"point: expected {s.dim} coordinates, got shape {p.shape}")
    return float(np.linalg.norm(s.vertices - p, axis=1).sum())


def barycentric_point(s: Simplex, weights) -> np.ndarray:
    """Convex combination of the vertices with the given weights."""
    w = np.asarray(weights, dtype=float)
    if w.shape != (s.dim + 1,):
        raise InvalidInputError(f"weights: expected {s.dim + 1} entries, got shape {w.shape}")
    if np.any(w < 0):
        raise InvalidInputError("weights: must be nonnegative")
    if abs(w.sum() - 1.0) > 1e-12:
        raise InvalidInputError(f"weights: must sum to 1, got {w.sum()!r}")
    return w @ s.vertices


def check_lemma(s: Simplex, p, tol: float = 1e-9) -> LemmaCheck:
    lhs = point_vertex_distance_sum(s, p)
    rhs = vertex_edge_sum_bound(s)
    slack = rhs - lhs
    return LemmaCheck(lhs=lhs, rhs=rhs, slack=slack, holds=slack >= -tol)


def uniform_barycentric(rng: np.random.Generator, k: int, size: int) -> np.ndarray:
    """``size`` weight vectors drawn uniformly from the (k-1)-simplex.

    Normalised i.i.d. exponentials are exactly Dirichlet(1, ..., 1).
    """
    e = rng.standard_exponential((size, k))
    return e / e.sum(axis=1, keepdims=True)


def random_simplex(rng: np.random.Generator, dim: int) -> Simplex:
    """Vertices uniform in the unit cube, redrawn while degenerate."""
    for _ in range(MAX_REJECTIONS):
        v = rng.random((dim + 1, dim))
        if not _is_degenerate(v):
            return Simplex(dim, v)
    raise DegenerateError(f"{MAX_REJECTIONS} consecutive degenerate simplices drawn")


@dataclass(frozen=True)
class LemmaReport:
    dim: int
    count: int
    min_slack: float
    witness_simplex: Simplex
    witness_point: np.ndarray

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "count": self.count,
            "min_slack": self.min_slack,
            "witness": {
                "simplex": self.witness_simplex.to_dict(),
                "point": self.witness_point.tolist(),
            },
        }


def _worst_in_simplex(s: Simplex, points: np.ndarray):
    lhs = np.linalg.norm(points[:, None, :] - s.vertices[None, :, :], axis=2).sum(axis=1)
    slack = vertex_edge_sum_bound(s) - lhs
    k = int(np.argmin(slack))
    return float(slack[k]), points[k]


def sample_lemma(
    dim: int,
    simplex_count: int,
    points_per_simplex: int,
    seed: int,
    *,
    simplex: Optional[Simplex] = None,
    include_vertices: bool = False,
    threads: Optional[int] = None,
) -> LemmaReport:
    """Search for the smallest slack of the distance-sum bound.

    Simplex ``i`` draws from its own stream seeded by ``(seed, i)``, so the
    report is the same for any number of threads. If ``simplex`` is given
    it is used for every draw instead of a random one; ``include_vertices``
    adds the vertices themselves to the points checked.
    """
    if dim < 1 or simplex_count < 1 or points_per_simplex < 1:
        raise InvalidInputError("dim, simplex_count and points_per_simplex must all be >= 1")
    if simplex is not None and simplex.dim != dim:
        raise InvalidInputError(f"simplex: dim {simplex.dim} does not match dim {dim}")

    def one(i: int):
        rng = np.random.default_rng([seed, i])
        s = simplex if simplex is not None else random_simplex(rng, dim)
        pts = uniform_barycentric(rng, dim + 1, points_per_simplex) @ s.vertices
        if include_vertices:
            pts = np.vstack([pts, s.vertices])
        slack, p = _worst_in_simplex(s, pts)
        return slack, s, p

    results = pmap(one, range(simplex_count), threads)
    # first index wins ties
    best = min(range(simplex_count), key=lambda i: results[i][0])
    slack, s, p = results[best]
    per = points_per_simplex + (dim + 1 if include_vertices else 0)
    return LemmaReport(
        dim=dim,
        count=simplex_count * per,
        min_slack=slack,
        witness_simplex=s,
        witness_point=np.asarray(p),
    )
