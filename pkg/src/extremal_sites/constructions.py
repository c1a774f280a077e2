"""Explicit extremal configurations and the known closed-form values."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import List

import numpy as np

from .errors import InvalidInputError
from .geometry import PointSet

EXACT_SUPREMUM = "exact-supremum"
LOWER_BOUND = "lower-bound"
EXACT_INFIMUM = "exact-infimum"

SUP_OMEGA_2_4 = 4.0 + 2.0 * math.sqrt(2.0 - math.sqrt(3.0))
INF_MU_2_4 = 5.0 + math.sqrt(3.0)
INF_MU_2_5 = 9.0 + 2.0 * math.sqrt(3.0)


@dataclass(frozen=True)
class ReferenceValue:
    name: str
    m: int
    n: int
    value: float
    kind: str
    formula: str

    def to_dict(self) -> dict:
        return asdict(self)


def simplex_height(n: int) -> float:
    """Distance from a vertex of the unit regular n-simplex to the opposite facet."""
    return math.sqrt((n + 1) / (2 * n))


def simplex_circumradius(n: int) -> float:
    """Circumradius of the unit regular n-simplex (0 for a single point)."""
    return math.sqrt(n / (2 * (n + 1)))


def regular_simplex(n: int) -> PointSet:
    """Unit-edge regular simplex with n + 1 vertices in E^n.

    Built by lifting: vertex k sits above the centroid of vertices 0..k-1 on
    the k-th axis, at the height that keeps every new edge at length 1.
    """
    if n < 1:
        raise InvalidInputError(f"n: must be >= 1, got {n}")
    v = np.zeros((n + 1, n))
    for k in range(1, n + 1):
        centroid = v[:k].mean(axis=0)
        v[k] = centroid
        v[k, k - 1] = math.sqrt(1.0 - simplex_circumradius(k - 1) ** 2)
    return PointSet(n, v)


def apex_distance(n: int) -> float:
    """Distance from the cap pole to each vertex of the opposite face."""
    return math.sqrt(2.0 * (1.0 - simplex_height(n)))


def thm33_configuration(n: int) -> PointSet:
    """Regular unit n-simplex plus the pole of the small spherical cap.

    The extra point lies on the ray from vertex 0 through the centroid of the
    opposite face, at distance 1 from vertex 0.
    """
    if n < 2:
        raise InvalidInputError(f"n: must be >= 2, got {n}")
    v = regular_simplex(n).points
    direction = v[1:].mean(axis=0) - v[0]
    apex = v[0] + direction / np.linalg.norm(direction)
    return PointSet(n, np.vstack([v, apex]))


def thm33_bound(n: int) -> float:
    """C(n+1, 2) + 1 + n * sqrt(2 (1 - sqrt((n+1)/(2n))))."""
    if n < 2:
        raise InvalidInputError(f"n: must be >= 2, got {n}")
    return math.comb(n + 1, 2) + 1 + n * apex_distance(n)


def extremal_quadrilateral() -> PointSet:
    """Unit equilateral triangle plus the midpoint of the unit arc about (0, 0)
    joining its other two vertices."""
    a2 = np.array([1.0, 0.0])
    a3 = np.array([0.5, math.sqrt(3.0) / 2.0])
    half = (math.atan2(a2[1], a2[0]) + math.atan2(a3[1], a3[0])) / 2.0
    a4 = np.array([math.cos(half), math.sin(half)])
    return PointSet(2, np.array([[0.0, 0.0], a2, a3, a4]))


def reference_values(m: int, n: int) -> List[ReferenceValue]:
    """Every known closed form for sup omega(m, n) and inf mu(m, n)."""
    if m < 1 or n < 2:
        raise InvalidInputError(f"need m >= 1 and n >= 2, got m={m}, n={n}")
    out: List[ReferenceValue] = []
    if n == m + 1:
        c = float(math.comb(n, 2))
        out.append(ReferenceValue(f"sup_omega_{m}_{n}", m, n, c, EXACT_SUPREMUM, f"C({n},2)"))
        out.append(ReferenceValue(f"inf_mu_{m}_{n}", m, n, c, EXACT_INFIMUM, f"C({n},2)"))
    if (m, n) == (2, 4):
        out.append(
            ReferenceValue("sup_omega_2_4", 2, 4, SUP_OMEGA_2_4, EXACT_SUPREMUM, "4+2*sqrt(2-sqrt(3))")
        )
    elif n == m + 2 and m >= 2:
        out.append(
            ReferenceValue(
                f"sup_omega_{m}_{n}",
                m,
                n,
                thm33_bound(m),
                LOWER_BOUND,
                f"C({m + 1},2)+1+{m}*sqrt(2*(1-sqrt({m + 1}/{2 * m})))",
            )
        )
    if n == m + 2:
        value = math.comb(n, 2) - 1 + 2 * math.sqrt((m + 1) / (2 * m))
        out.append(
            ReferenceValue(
                f"inf_mu_{m}_{n}", m, n, value, EXACT_INFIMUM, f"C({n},2)-1+2*sqrt({m + 1}/{2 * m})"
            )
        )
    if (m, n) == (2, 5):
        out.append(ReferenceValue("inf_mu_2_5", 2, 5, INF_MU_2_5, EXACT_INFIMUM, "9+2*sqrt(3)"))
    return out
