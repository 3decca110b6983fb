"""Exact computation and verification of the Bartholdi zeta function of a graph."""

from .algebra import BiPoly, RationalFunction
from .corpus import BUILTIN_NAMES, builtin
from .errors import BartholdiError
from .graph_core import Digraph, build_digraph, build_matrices, graph_info
from .zeta import edge_zeta_inverse, vertex_zeta_inverse, zeta_inverse

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_NAMES",
    "BartholdiError",
    "BiPoly",
    "Digraph",
    "RationalFunction",
    "build_digraph",
    "build_matrices",
    "builtin",
    "edge_zeta_inverse",
    "graph_info",
    "vertex_zeta_inverse",
    "zeta_inverse",
]
