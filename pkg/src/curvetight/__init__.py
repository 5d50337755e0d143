"""Monotonic tightening of multicurves on surfaces."""

from .mapcore import Curve, InvalidCurve, faces, make_curve
from .schema import Schema, base_schema

__all__ = ["Curve", "InvalidCurve", "Schema", "base_schema", "faces", "make_curve"]
__version__ = "0.1.0"
