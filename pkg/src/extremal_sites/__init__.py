"""Sums of pairwise distances in diameter-normalised point sets."""
from .constructions import (
    ReferenceValue,
    extremal_quadrilateral,
    reference_values,
    regular_simplex,
    thm33_bound,
    thm33_configuration,
)
from .errors import DegenerateError, GeometryError, InvalidInputError, SingularityError
from .geometry import (
    DistanceSummary,
    PointSet,
    collinear_triple_exists,
    distance_matrix,
    functionals,
    is_convex_position_4,
    normalize_diameter,
)
from .search import SearchConfig, SearchResult, grid_oracle_2_4, optimize_omega
from .simplex import Simplex, check_lemma, sample_lemma, vertex_edge_sum_bound

__version__ = "0.1.0"

__all__ = [
    "DegenerateError",
    "DistanceSummary",
    "GeometryError",
    "InvalidInputError",
    "PointSet",
    "ReferenceValue",
    "SearchConfig",
    "SearchResult",
    "Simplex",
    "SingularityError",
    "check_lemma",
    "collinear_triple_exists",
    "distance_matrix",
    "extremal_quadrilateral",
    "functionals",
    "grid_oracle_2_4",
    "is_convex_position_4",
    "normalize_diameter",
    "optimize_omega",
    "reference_values",
    "regular_simplex",
    "sample_lemma",
    "thm33_bound",
    "thm33_configuration",
    "vertex_edge_sum_bound",
]
