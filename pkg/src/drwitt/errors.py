class DrwittError(Exception):
    pass


class FieldMismatch(DrwittError, ValueError):
    pass


class BudgetExhausted(DrwittError):
    """An enumeration or search budget ran out before the target was reached."""


class FactorLimit(BudgetExhausted):
    pass


class RecognitionFailure(BudgetExhausted):
    pass


class PrecisionError(DrwittError):
    """Working precision is too small for the requested certified accuracy."""


class PoleError(DrwittError):
    """A function was evaluated at (or numerically indistinguishable from) a pole."""


class VerificationError(DrwittError):
    """A mathematical self-check failed."""
