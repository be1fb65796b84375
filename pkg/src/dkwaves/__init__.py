"""Spherical waves of the Dirac-Kaehler field and their Dirac-fermion expansions.

The boson-type spherical solutions are built in the diagonal spherical tetrad
and certified against the wave operator with finite-difference residuals.  A
local spinor rotation then splits each solution into four Dirac columns, whose
expansions over Dirac spherical waves are checked numerically.
"""

from .errors import (
    DKWavesError,
    DomainError,
    InvalidSpecError,
    UnimplementedCaseError,
    UnsupportedRegimeError,
)

__version__ = "0.1.0"

__all__ = [
    "DKWavesError",
    "DomainError",
    "InvalidSpecError",
    "UnimplementedCaseError",
    "UnsupportedRegimeError",
    "__version__",
]
