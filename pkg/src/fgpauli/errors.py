"""Exception hierarchy. The CLI maps each class to an exit code."""


class FGPauliError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ValidationError(FGPauliError, ValueError):
    """Input violates a structural constraint (shape, symmetry, parity)."""

    exit_code = 2


class DecompositionError(FGPauliError):
    """The T22 block is singular or too ill-conditioned for a Balian-Brezin form."""

    exit_code = 3


class BranchError(FGPauliError):
    """Principal logarithm is ambiguous, so the amplitude prefactor sign is too."""

    exit_code = 4


class VerificationError(FGPauliError):
    """A formula disagreed with the brute-force reference."""

    exit_code = 5
