"""Invariants of generic closed curves on oriented closed surfaces.

Two independent exact computation paths (a finite topological formula and an
Euler-characteristic integral) for the q-deformed rotation number of a
homologically trivial curve, with the derived rotation-number and J-type
invariants, diagram moves, and a numerical differential-geometry path on the
round sphere and flat torus for cross-validation.
"""

from .laurent import HalfLaurent
from .diagram import (
    CurveDiagram,
    IndexFunction,
    SignedGaussCode,
    build_diagram,
    canonicalize,
    index_function,
    parse_diagram,
    serialize_diagram,
    trace_boundary_cycles,
)
from .invariants import InvariantReport, full_report

__all__ = [
    "HalfLaurent",
    "CurveDiagram",
    "IndexFunction",
    "SignedGaussCode",
    "build_diagram",
    "canonicalize",
    "index_function",
    "parse_diagram",
    "serialize_diagram",
    "trace_boundary_cycles",
    "InvariantReport",
    "full_report",
]
