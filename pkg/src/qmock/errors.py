"""Exception types shared across the package."""


class QMockError(Exception):
    """Base class for errors raised by qmock."""


class OrderMismatchError(QMockError, ValueError):
    """Operands live in different cyclotomic fields."""


class DegenerateSeriesError(QMockError, ValueError):
    """A series operation would leave no determined coefficients."""


class TruncationError(QMockError, ValueError):
    """A coefficient was requested at or beyond the known truncation."""


class UnsupportedSubstitutionError(QMockError, ValueError):
    """A substitution tau -> s*tau + b needs a phase outside Q(zeta_N)."""


class PoleError(QMockError, ValueError):
    """Evaluation point sits on a pole, or the pole order is unsupported."""


class ResourceLimitError(QMockError, ValueError):
    """A computation was refused because it exceeds a configured bound."""


class AccuracyError(QMockError, ArithmeticError):
    """A numerical routine could not reach its requested accuracy."""


class ConditioningError(AccuracyError):
    """A finite-difference step is unsuitable for the working precision."""
