"""Exact computations with reduced enveloping superalgebras of basic classical
Lie superalgebras in positive characteristic."""

__version__ = "0.1.0"

from .exactlin import FieldCtx, Matrix
from .superlie import LieSuperAlgebra, PChar, construct

__all__ = ["FieldCtx", "Matrix", "LieSuperAlgebra", "PChar", "construct", "__version__"]
