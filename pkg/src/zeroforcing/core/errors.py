class PreconditionError(ValueError):
    """Raised when inputs violate an operation's preconditions or a size guard."""


class GenerationError(RuntimeError):
    """Raised when rejection sampling exhausts its attempt budget."""


class NumericalError(ArithmeticError):
    """Raised on singular systems, integrator failures and empty root brackets."""


class PhaseError(NumericalError):
    """Raised when a phase runs backwards: a negative top-type mass or tau."""


class ExperimentError(RuntimeError):
    """Raised when too many samples of a batch fail."""
