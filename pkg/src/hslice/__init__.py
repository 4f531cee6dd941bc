"""Obstructions and constructions for knots bounding surfaces in punctured closed 4-manifolds."""

from .catalog import KnotEntry, named_knot, resolve_knot
from .manifolds import FourManifold, class_geometry, connected_sum, parse_manifold, reverse_orientation, standard
from .obstructions import SpinFilling, SurfaceProblem, evaluate_all, upper_bound_rules
from .scan import ScanConfig, slice_scan

__version__ = "0.1.0"

__all__ = [
    "FourManifold",
    "KnotEntry",
    "ScanConfig",
    "SpinFilling",
    "SurfaceProblem",
    "class_geometry",
    "connected_sum",
    "evaluate_all",
    "named_knot",
    "parse_manifold",
    "resolve_knot",
    "reverse_orientation",
    "slice_scan",
    "standard",
    "upper_bound_rules",
]
