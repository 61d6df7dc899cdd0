"""Cubulations of low-dimensional manifolds and their bubble-move theory."""

__version__ = "0.1.0"

from .complex_core import (Cubulation, ValidationReport, doubling,
                           from_triangulation, make_boundary_cube,
                           make_klein_grid, make_pillow, make_polygon,
                           make_torus_grid)

__all__ = [
    "Cubulation",
    "ValidationReport",
    "doubling",
    "from_triangulation",
    "make_boundary_cube",
    "make_klein_grid",
    "make_pillow",
    "make_polygon",
    "make_torus_grid",
    "__version__",
]
