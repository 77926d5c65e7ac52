"""Hyperbolic structures on link complements from diagram label equations."""

from .diagram import PlanarDiagram, parse_pd
from .equations import assemble
from .solver import select_geometric, solve_all

__all__ = ["PlanarDiagram", "parse_pd", "assemble", "select_geometric", "solve_all"]
__version__ = "0.1.0"
