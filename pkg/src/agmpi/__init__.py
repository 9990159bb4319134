"""High-precision pi and elementary functions via the arithmetic-geometric mean.

The package computes pi by the Gauss-Legendre iteration, by three
Borwein-Borwein iterations (quadratic and quartic), and by linearly
convergent series (Madhava, Ramanujan, Chudnovsky with binary splitting),
cross-verifies the algorithms against one another and against sharp
theta-function error bounds, and builds AGM-based elementary functions
(log, exp, arctan, arccos) on the same machinery.
"""

from .mpreal import (
    Complex,
    DomainError,
    ParseError,
    Precision,
    PrecisionError,
    RangeError,
    Real,
    VerificationError,
    from_decimal,
    to_decimal,
)

__version__ = "1.0.0"

__all__ = [
    "Complex",
    "DomainError",
    "ParseError",
    "Precision",
    "PrecisionError",
    "RangeError",
    "Real",
    "VerificationError",
    "from_decimal",
    "to_decimal",
    "__version__",
]
