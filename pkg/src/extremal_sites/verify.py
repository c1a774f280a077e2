"""Pass/fail verification suites behind ``extremal-sites verify``."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from . import landscape as ls
from .constructions import (
    apex_distance,
    extremal_quadrilateral,
    simplex_circumradius,
    simplex_height,
    thm33_bound,
    thm33_configuration,
)
from .geometry import congruence_residual, distance_matrix, functionals
from .simplex import sample_lemma

LEMMA_TOL = 1e-9


@dataclass
class Check:
    name: str
    value: float
    tolerance: float
    passed: bool

    def to_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "tolerance": self.tolerance, "passed": self.passed}


@dataclass
class Verification:
    target: str
    checks: List[Check] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, value: float, tolerance: float, passed: bool) -> None:
        self.checks.append(Check(name, float(value), float(tolerance), bool(passed)))

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "details": self.details,
        }


def verify_lemma(dim: int, simplices: int, points: int, seed: int, threads: Optional[int] = None) -> Verification:
    v = Verification("lemma")
    report = sample_lemma(dim, simplices, points, seed, threads=threads)
    v.add("min_slack", report.min_slack, LEMMA_TOL, report.min_slack >= -LEMMA_TOL)
    vertices = sample_lemma(dim, simplices, 1, seed, include_vertices=True, threads=threads)
    v.add("vertex_equality_slack", abs(vertices.min_slack), 1e-12, abs(vertices.min_slack) <= 1e-12)
    v.details["report"] = report.to_dict()
    return v


def verify_landscape(
    resolution: float = 1e-3,
    band: float = 1e-3,
    fd_points: int = 1000,
    arcs: int = 100,
    seed: int = 0,
    pole_margin: float = 0.02,
    threads: Optional[int] = None,
) -> Verification:
    v = Verification("landscape")
    rng = np.random.default_rng(seed)
    grad_err, hess_err = ls.finite_difference_errors(
        ls.sample_bow_interior(rng, fd_points, band, pole_margin)
    )
    v.add("gradient_fd_error", grad_err, 1e-5, grad_err <= 1e-5)
    v.add("hessian_fd_error", hess_err, 1e-5, hess_err <= 1e-5)

    curv = ls.curvature_positive_on_grid(resolution, band, threads)
    v.add("min_rt_minus_s2", curv.minimum, 0.0, curv.minimum > 0.0)
    stat = ls.stationary_scan(resolution, band, threads)
    v.add("min_gradient_norm", stat.minimum, 1e-3, stat.minimum > 1e-3)

    (bx, by), bval = ls.boundary_maximize()
    expected = 2.0 * math.sqrt(2.0 - math.sqrt(3.0))
    v.add("boundary_max_error", abs(bval - expected), 1e-9, abs(bval - expected) <= 1e-9)
    bis = (math.cos(math.pi / 6), math.sin(math.pi / 6))
    dist = math.hypot(bx - bis[0], by - bis[1])
    v.add("boundary_argmax_error", dist, 1e-6, dist <= 1e-6)

    worst = 0.0
    for arc in ls.random_admissible_arcs(rng, arcs):
        worst = max(worst, abs(ls.arc_chord_sum_max(arc).argmax[0] - 0.5))
    v.add("arc_argmax_x_error", worst, 1e-8, worst <= 1e-8)

    v.details.update(
        {
            "curvature": curv.to_dict(),
            "stationary": stat.to_dict(),
            "boundary_max": {"argmax": [bx, by], "value": bval},
        }
    )
    return v


def base_projection_error(points: np.ndarray) -> float:
    """Distance between the apex's projection onto the base hyperplane and
    the base centroid (base = rows 1..n, apex = last row)."""
    base, apex = points[1:-1], points[-1]
    edges = (base[1:] - base[0]).T
    coef, *_ = np.linalg.lstsq(edges, apex - base[0], rcond=None)
    foot = base[0] + edges @ coef
    return float(np.linalg.norm(foot - base.mean(axis=0)))


def verify_thm33(nmax: int = 12) -> Verification:
    v = Verification("thm33")
    dist_res = unit_res = proj_res = ident_res = omega_res = 0.0
    apex_below_one = True
    for n in range(2, nmax + 1):
        ps = thm33_configuration(n)
        dm = distance_matrix(ps)
        dist_res = max(dist_res, float(np.abs(dm[-1, 1:-1] - apex_distance(n)).max()))
        unit_res = max(unit_res, abs(dm[-1, 0] - 1.0), float(np.abs(dm[:-1, :-1][np.triu_indices(n + 1, 1)] - 1).max()))
        proj_res = max(proj_res, base_projection_error(ps.points))
        h, rf = simplex_height(n), simplex_circumradius(n - 1)
        ident_res = max(ident_res, abs((1 - h) ** 2 + rf**2 - 2 * (1 - h)))
        omega_res = max(omega_res, abs(functionals(ps).omega - thm33_bound(n)))
        apex_below_one &= apex_distance(n) < 1.0
    v.add("apex_distance_residual", dist_res, 1e-10, dist_res <= 1e-10)
    v.add("unit_distance_residual", unit_res, 1e-12, unit_res <= 1e-12)
    v.add("base_projection_residual", proj_res, 1e-10, proj_res <= 1e-10)
    v.add("height_identity_residual", ident_res, 1e-12, ident_res <= 1e-12)
    v.add("omega_vs_bound_residual", omega_res, 1e-10, omega_res <= 1e-10)
    v.add("apex_distance_below_one", 0.0 if apex_below_one else 1.0, 0.0, apex_below_one)
    cong = congruence_residual(thm33_configuration(2), extremal_quadrilateral())
    v.add("n2_congruence_residual", cong, 1e-9, cong <= 1e-9)
    v.details["nmax"] = nmax
    return v
