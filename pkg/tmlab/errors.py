"""Exception hierarchy for the Thue-Morse lab.

Every error kind named by a lab operation is a subclass of ``LabError`` so
callers (and the CLI) can catch the whole family in one place.
"""


class LabError(Exception):
    """Base class for all lab errors."""

    pass


class CapExceededError(LabError):
    """Raised when a result would exceed a configured size cap."""

    pass


class LanguageInstabilityError(LabError):
    """Raised when doubling the generating prefix changes the factor set."""

    pass


class OutOfRangeError(LabError):
    """Raised when an integer argument lies outside its supported range."""

    pass


class InsufficientPrefixError(LabError):
    """Raised when an operation needs more digits than are available."""

    def __init__(self, required: int, available: int, what: str = "digits") -> None:
        self.required = required
        self.available = available
        super().__init__(f"need {required} {what}, only {available} available")


class PrefixComparableError(LabError):
    """Raised when comparing two words one of which is a strict prefix of the other."""

    pass


class UndefinedPointError(LabError):
    """Raised when a potential is evaluated where it is undefined."""

    pass


class FactorWordError(LabError):
    """Raised when a return cylinder word is a factor of the subshift."""

    pass


class UnsupportedPotentialError(LabError):
    """Raised when an operation does not support a potential variant."""

    pass


class BruteForceLimitError(LabError):
    """Raised when brute-force enumeration is asked for too long words."""

    pass


class ConvergenceError(LabError):
    """Raised when an iteration fails to converge within its cap."""

    def __init__(self, message: str, delta: float) -> None:
        self.delta = delta
        super().__init__(f"{message} (final delta {delta:.3e})")


class ValidationFailure(LabError):
    """Raised when an invariant suite reports violations."""

    def __init__(self, message: str, violations: list | None = None) -> None:
        self.violations = violations or []
        super().__init__(message)
