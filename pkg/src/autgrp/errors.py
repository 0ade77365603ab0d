"""Exception types raised across the package."""


class AutGrpError(Exception):
    """Base class for package errors."""


class SingularInput(AutGrpError, ValueError):
    """Raised when an operation needs a nonsingular form matrix.

    Singular forms are handled through the pencil route in
    :mod:`autgrp.pencil_kronecker`.
    """


class StructureError(AutGrpError):
    """A rank or pairing decision could not be made at the given tolerance.

    Attributes
    ----------
    stage : str
        Name of the computation stage that failed.
    tol : float or None
        Relative tolerance in effect.
    """

    def __init__(self, message, stage="structure", tol=None):
        self.stage = stage
        self.tol = tol
        if tol is not None:
            message = f"{message} [stage={stage}, tol={tol:g}]"
        else:
            message = f"{message} [stage={stage}]"
        super().__init__(message)


class InputError(AutGrpError, ValueError):
    """Malformed matrix file or argument."""


class DomainError(AutGrpError, ValueError):
    """An operation was called outside its domain (e.g. a surface grid for dim != 2)."""
