"""Truncated normal forms and Bruno ideals of logarithmic vector fields."""

from .derivation import LogBasis, LogDerivation
from .ideal import TruncatedIdeal
from .kernels import BACKEND
from .scalars import CC, QQ, QQI, ComplexFloatField, GaussQ
from .series import Automorphism, Series

__version__ = "0.1.0"

__all__ = ["Series", "Automorphism", "LogDerivation", "LogBasis", "TruncatedIdeal",
           "QQ", "QQI", "CC", "ComplexFloatField", "GaussQ", "BACKEND", "__version__"]
