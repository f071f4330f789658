"""
Surface Immersions - regular homotopy invariants of immersed circles and graphs on surfaces.
"""

__version__ = "0.1.0"

from .classify import circle_invariants, decide_circle, decide_via_difference
from .errors import SurfaceImmersionError
from .graphs import decide_graph, graph_full_invariant
from .schema import parse_schema

__all__ = [
    "circle_invariants",
    "decide_circle",
    "decide_via_difference",
    "decide_graph",
    "graph_full_invariant",
    "parse_schema",
    "SurfaceImmersionError",
    "__version__",
]
