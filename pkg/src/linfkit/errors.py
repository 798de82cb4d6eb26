"""Exception hierarchy shared by every module."""


class LinfError(Exception):
    """Base class for all errors raised by linfkit."""


class MalformedInput(LinfError, ValueError):
    """Inputs have the wrong shape, degree or underlying space."""


class TruncationError(LinfError):
    """A computation needs a weight or arity above the configured cap."""


class InvalidComplex(LinfError, ValueError):
    """A differential of degree +1 that does not square to zero."""


class NotInvertible(LinfError, ValueError):
    """The linear component of a comorphism is singular."""


class SymmetryViolation(LinfError, ValueError):
    """A comorphism fails the pairing symmetry needed by the coadjoint cocycle test."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotMaurerCartan(LinfError, ValueError):
    """An operation that requires a Maurer-Cartan element was given something else."""


class ParseError(LinfError, ValueError):
    """Structure file could not be parsed or resolved."""

    def __init__(self, message, key=None, line=None, column=None):
        where = []
        if line is not None:
            where.append(f"line {line}, column {column}")
        if key is not None:
            where.append(f"at {key!r}")
        if where:
            message = f"{message} ({'; '.join(where)})"
        super().__init__(message)
        self.key = key
        self.line = line
        self.column = column


class NotOOperator(LinfError, ValueError):
    """A construction that needs an O-operator was given a candidate that fails the check."""
