"""Exact knot and link invariants from planar diagrams."""

from .codes import emit_pd, parse
from .diagram import Diagram, canonical_code
from .errors import KnotforgeError
from .poly import LaurentPoly

__version__ = "0.1.0"

__all__ = ["Diagram", "KnotforgeError", "LaurentPoly", "canonical_code", "emit_pd", "parse", "__version__"]
