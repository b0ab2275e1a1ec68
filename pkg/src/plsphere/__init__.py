"""Combinatorial tools for recognising triangulated spheres.

Simplicial complexes and their validation, k-cell distances, local
subdivision, separation along a 2-sphere, curve contraction, projection of
contractions onto one side of a sphere, and distance-balanced shelling.
"""

from .complex import Complex, build_from_maximal_cells, star_and_link, validate
from .contraction import ContractionSequence, Curve, search_contraction, validate_contraction
from .errors import TopologyError
from .io import emit_report, load_complex
from .metrics import distance_field, k_cell_distance
from .projection import find_passes, project_arc, project_sequence
from .separation import Location, check_surface, separate
from .shelling import shell, sphere_certificate, verify_trace
from .subdivision import barycentric_subdivide_cell, insert_gradual_subsequence, split_edge

__all__ = [
    "Complex", "build_from_maximal_cells", "star_and_link", "validate",
    "ContractionSequence", "Curve", "search_contraction", "validate_contraction",
    "TopologyError", "emit_report", "load_complex",
    "distance_field", "k_cell_distance",
    "find_passes", "project_arc", "project_sequence",
    "Location", "check_surface", "separate",
    "shell", "sphere_certificate", "verify_trace",
    "barycentric_subdivide_cell", "insert_gradual_subsequence", "split_edge",
]
