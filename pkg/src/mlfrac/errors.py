"""Exception types shared across the package."""


class MlfracError(Exception):
    """Base class for all numeric errors raised by this package."""


class DomainError(MlfracError):
    """An argument lies outside the documented working domain."""


class PoleError(MlfracError):
    """Gamma function evaluated at a non-positive integer."""


class ConvergenceError(MlfracError):
    """A series failed to converge within the term cap."""


class DepthExceeded(MlfracError):
    """Adaptive quadrature hit its bisection depth limit before meeting tolerance."""


class NonFiniteIntegrand(MlfracError):
    """An integrand sample evaluated to NaN or infinity."""


class SingularityError(MlfracError):
    """An operator was evaluated at a point where its value is unbounded."""


class DegenerateOrder(MlfracError):
    """The fractional order is too close to 1 for the Mittag-Leffler kernel."""


class DivergenceError(MlfracError):
    """A fixed-point iteration diverged or exhausted its iteration budget."""


class ExprSyntaxError(SyntaxError):
    """Expression parse failure, annotated with the byte offset and expected tokens."""

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        detail = f"{message} at offset {offset}"
        if expected:
            detail += " (expected " + " or ".join(expected) + ")"
        super().__init__(detail)
        self.offset = offset
        self.expected = expected


class UnknownIdentifier(ExprSyntaxError):
    """An identifier other than x, pi, e, or a supported function name."""
