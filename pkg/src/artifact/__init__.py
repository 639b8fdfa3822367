"""Exact L1 geodesic distance, diameter and center in polygonal domains with holes."""

from .center import CenterResult, center_improved, center_preliminary, eval_R, project_R, sigma_center
from .decomposition import Cell, Decomposition, decompositions
from .diameter import DiameterResult, PairContext, cellpair_fn, constrained_diameter, diameter_improved, diameter_preliminary
from .distance_engine import build_visgraph, geodesic_dist
from .geometry import P, Point, PolygonalDomain, load_domain, make_domain, validate_domain
from .oracle import oracle_dist

__version__ = "0.1.0"

__all__ = [
    "CenterResult",
    "Cell",
    "Decomposition",
    "DiameterResult",
    "P",
    "PairContext",
    "Point",
    "PolygonalDomain",
    "build_visgraph",
    "cellpair_fn",
    "center_improved",
    "center_preliminary",
    "constrained_diameter",
    "decompositions",
    "diameter_improved",
    "diameter_preliminary",
    "eval_R",
    "geodesic_dist",
    "load_domain",
    "make_domain",
    "oracle_dist",
    "project_R",
    "sigma_center",
    "validate_domain",
]
