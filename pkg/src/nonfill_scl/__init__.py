"""Exact stable commutator length of non-filling chains on closed surfaces.

Pipeline: ``model`` parses and validates a handle decomposition,
``turnpaths`` enumerates taut turn paths, ``lp`` builds and solves the
matching-equation program over the rationals, and ``reassembly`` glues an
optimal vertex back into a surface certificate.
"""
from .errors import SclError
from .lp import build_program, compute_scl, solve, verify_certificate
from .model import load_spec, validate
from .reassembly import extremal_surface
from .turnpaths import build_side_graph, enumerate_taut_turn_paths

__version__ = "0.1.0"

__all__ = ["SclError", "build_program", "build_side_graph", "compute_scl",
           "enumerate_taut_turn_paths", "extremal_surface", "load_spec", "solve",
           "validate", "verify_certificate"]
