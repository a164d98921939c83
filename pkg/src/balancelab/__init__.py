"""balancelab: exact balance / strong balance / omnitonal numbers of small
pattern graphs in 2-edge-coloured complete graphs, with independent oracles.
"""

__version__ = "0.1.0"

from .graphs import (Graph, Graph6Error, canonical_form, canonical_graph,
                     edge_index, emit_graph6, parse_graph6)

__all__ = [
    "Graph",
    "Graph6Error",
    "canonical_form",
    "canonical_graph",
    "edge_index",
    "emit_graph6",
    "parse_graph6",
    "__version__",
]
