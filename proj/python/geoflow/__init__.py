"""Geodesic flow on ellipsoids with symmetry."""

from ._core import (
    EllipsoidSpec,
    GeoflowError,
    action,
    conserved,
    dI_dJ,
    integrate,
    landmarks,
    random_point,
    relation_residuals,
    section_curve,
    smooth_action,
    spec,
    tangency_j,
    verify,
)

__all__ = [
    "EllipsoidSpec",
    "GeoflowError",
    "action",
    "conserved",
    "dI_dJ",
    "integrate",
    "landmarks",
    "random_point",
    "relation_residuals",
    "section_curve",
    "smooth_action",
    "spec",
    "tangency_j",
    "verify",
]
