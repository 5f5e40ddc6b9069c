"""Curvature of real Stiefel manifolds St(p, n) under the alpha-family of metrics.

``alpha = 1`` is the embedded metric and ``alpha = 1/2`` the canonical one.
"""

from .cheeger import SkewTriple, gz_sectional, hom_curvature
from .curvature import (
    SectionEval,
    curvature_ambient_analytic,
    curvature_ambient_fd,
    curvature_coords,
    ricci,
    scalar_curvature,
    sectional,
    sectional_numerator,
)
from .einstein import EinsteinSolution, einstein_alphas, verify_einstein
from .sectional_range import (
    RangeReport,
    corner_sections,
    frak_c,
    frak_l,
    gamma_min,
    interval_table,
    optimize_range,
    p2_range,
    sweep,
)
from .stiefel import StiefelFrame, TangentCoords, complete_frame, from_coords, metric_inner, to_coords

__version__ = "0.1.0"

__all__ = [
    "SkewTriple",
    "gz_sectional",
    "hom_curvature",
    "SectionEval",
    "curvature_ambient_analytic",
    "curvature_ambient_fd",
    "curvature_coords",
    "ricci",
    "scalar_curvature",
    "sectional",
    "sectional_numerator",
    "EinsteinSolution",
    "einstein_alphas",
    "verify_einstein",
    "RangeReport",
    "corner_sections",
    "frak_c",
    "frak_l",
    "gamma_min",
    "interval_table",
    "optimize_range",
    "p2_range",
    "sweep",
    "StiefelFrame",
    "TangentCoords",
    "complete_frame",
    "from_coords",
    "metric_inner",
    "to_coords",
]
