"""Ununfoldable polyhedra: constructions, exhaustive edge-unfolding
verification, and cross-face unfoldings."""

from . import constructions, errors, mesh, search, unfold
from .constructions import (
    BasicHatParams,
    FanParams,
    TriHatParams,
    build_basic_hat,
    build_open_fan,
    build_reference,
    build_spiked_octahedron,
    build_spiked_tetrahedron,
    build_triangulated_hat,
    validate_hat,
)
from .mesh import PolyhedronMesh, build_mesh
from .search import search_edge_unfolding
from .unfold import layout, check_overlap, unfold_edges, validate_cutting

__version__ = "0.1.0"
