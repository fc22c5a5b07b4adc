"""Exception types shared across modules."""

from .exactla import BudgetExceeded


class VasgeoError(Exception):
    pass


class NotMember(VasgeoError):
    pass


class ConeMismatch(VasgeoError):
    pass


class NotInLattice(VasgeoError):
    pass


class DimensionMismatch(VasgeoError):
    pass


class EmptyLine(VasgeoError):
    pass


class PreconditionViolated(VasgeoError):
    pass


class WitnessVerificationFailed(VasgeoError):
    pass


class ProviderFailure(VasgeoError):
    pass


class InputError(VasgeoError):
    """Malformed descriptor; ``path`` names the offending JSON location."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


__all__ = [
    "BudgetExceeded",
    "VasgeoError",
    "NotMember",
    "ConeMismatch",
    "NotInLattice",
    "DimensionMismatch",
    "EmptyLine",
    "PreconditionViolated",
    "WitnessVerificationFailed",
    "ProviderFailure",
    "InputError",
]
