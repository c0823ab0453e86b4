"""Exact piecewise-linear dynamics over a quadratic field.

Arithmetic in Q(alpha) with alpha^2 = p*alpha + q, PL homeomorphisms with
slopes in <alpha>, box-map realization, local rotations, circle lifts with
exact rotation numbers, continued fractions of quadratic surds, and a
floating-point smoothing/regularity toolkit.
"""

from .exactfield import FieldElem, FieldError, SlopeSpec, make_alpha, power_alpha
from .plmap import JumpValue, Piece, PLMap, PLMapError

__version__ = "0.1.0"

__all__ = [
    "FieldElem",
    "FieldError",
    "SlopeSpec",
    "make_alpha",
    "power_alpha",
    "JumpValue",
    "Piece",
    "PLMap",
    "PLMapError",
    "__version__",
]
