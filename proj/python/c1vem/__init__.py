"""Nonconforming virtual elements for fourth order problems."""

from ._core import (
    ConvergenceRecord,
    Error,
    PolyMesh,
    RunConfig,
    Space,
    build_remapped_hexagons,
    build_structured_triangles,
    eoc,
    run_study,
    solve_once,
    space_tuple,
    to_csv,
)

__all__ = [
    "ConvergenceRecord",
    "Error",
    "PolyMesh",
    "RunConfig",
    "Space",
    "build_remapped_hexagons",
    "build_structured_triangles",
    "eoc",
    "run_study",
    "solve_once",
    "space_tuple",
    "to_csv",
]
