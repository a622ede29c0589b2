"""Nested generating sets of closed walks in planar graphs."""

from .canonical import GeneratingSet, build_canonical, face_boundary_reduction, verify_canonical
from .membership import Verdict, generated_by
from .nesting import crossing, mu, nested_cycles
from .planar_map import Graph, PlanarMap, embed
from .uncrossing import uncross
from .walks import ClosedWalk, WalkClass

__version__ = "0.1.0"

__all__ = [
    "ClosedWalk", "GeneratingSet", "Graph", "PlanarMap", "Verdict", "WalkClass", "build_canonical",
    "crossing", "embed", "face_boundary_reduction", "generated_by", "mu", "nested_cycles", "uncross",
    "verify_canonical",
]
