"""Geodesic distances, shortest path maps, and certified center/radius
approximation in polygonal domains with holes."""

from .primitives import (
    Point,
    Tolerance,
    orient,
    point_in_ring,
    segment_intersection,
)
from .domain import (
    PolygonalDomain,
    ValidationReport,
    Violation,
    domain_from_dict,
    load_domain,
    save_domain,
    validate,
)
from .visibility import VisibilityGraph, visibility_graph, visible, visible_corners
from .geodesic import (
    GeodesicPath,
    ShortestPathTree,
    build_spt,
    corner_distance_table,
    distances_from_point,
    geodesic_distance,
    path_length,
)
from .spm import (
    BisectorArc,
    ShortestPathMap,
    SpmCell,
    SpmRoot,
    SpmVertex,
    build_spm,
    farthest_neighbors,
    locate,
    phi,
)
from .center import (
    CandidateSet,
    CenterEstimate,
    DiameterEstimate,
    approx_center,
    approx_diameter,
    grid_candidates,
    refine_center,
    two_approx_radius,
)
from .oracle import (
    DenseGraph,
    Lemma1Report,
    brute_phi,
    check_lemma1,
    dense_distance,
    random_domain,
    random_point,
)
from . import fixtures, report

__all__ = [
    "Point", "Tolerance", "orient", "point_in_ring", "segment_intersection",
    "PolygonalDomain", "ValidationReport", "Violation", "validate",
    "domain_from_dict", "load_domain", "save_domain",
    "VisibilityGraph", "visibility_graph", "visible", "visible_corners",
    "GeodesicPath", "ShortestPathTree", "build_spt", "corner_distance_table",
    "distances_from_point", "geodesic_distance", "path_length",
    "BisectorArc", "ShortestPathMap", "SpmCell", "SpmRoot", "SpmVertex",
    "build_spm", "farthest_neighbors", "locate", "phi",
    "CandidateSet", "CenterEstimate", "DiameterEstimate", "approx_center",
    "approx_diameter", "grid_candidates", "refine_center", "two_approx_radius",
    "DenseGraph", "Lemma1Report", "brute_phi", "check_lemma1", "dense_distance",
    "random_domain", "random_point",
    "fixtures", "report",
]

__version__ = "0.1.0"
