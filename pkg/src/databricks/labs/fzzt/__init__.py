from .precision import Numerics, PrecisionComplex, PrecisionScalar
from .xi import XiFunction, ZeroList

__all__ = ["Numerics", "PrecisionComplex", "PrecisionScalar", "XiFunction", "ZeroList"]
