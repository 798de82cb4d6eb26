"""Exact rational toolkit for Lie infinity algebras, their actions, O-operators and derived brackets.

Everything is computed over ``fractions.Fraction`` on finite graded bases;
checks return :class:`~linfkit.verdict.Verdict` objects carrying a witness
monomial when they fail.
"""

from .config import caps, configured
from .errors import (
    InvalidComplex,
    LinfError,
    MalformedInput,
    NotInvertible,
    NotMaurerCartan,
    NotOOperator,
    ParseError,
    SymmetryViolation,
    TruncationError,
)
from .graded import GradedSpace, direct_sum, dual, shift
from .linfty import LieInftyStructure, SkewBrackets, check_jacobi, decalage, undecalage
from .symcoalg import Coderivation, Comorphism, Family, coproduct, rn_bracket
from .verdict import Verdict

__version__ = "0.1.0"

__all__ = [
    "caps", "configured", "InvalidComplex", "LinfError", "MalformedInput", "NotInvertible",
    "NotMaurerCartan", "NotOOperator", "ParseError", "SymmetryViolation", "TruncationError",
    "GradedSpace", "direct_sum", "dual", "shift", "LieInftyStructure", "SkewBrackets",
    "check_jacobi", "decalage", "undecalage", "Coderivation", "Comorphism", "Family",
    "coproduct", "rn_bracket", "Verdict",
]
