"""Exception hierarchy shared by all modules."""


class PhaseIntegralError(Exception):
    """Base class for every error raised by :mod:`phaseint`."""


class ExprSyntaxError(PhaseIntegralError):
    """Malformed expression source.

    ``offset`` is the UTF-8 byte offset of the offending token and
    ``expected`` the set of token kinds that would have been accepted.
    """

    def __init__(self, message, source, offset, expected=()):
        self.source = source
        self.offset = offset
        self.expected = frozenset(expected)
        detail = message
        if self.expected:
            detail += " (expected one of: " + ", ".join(sorted(self.expected)) + ")"
        super().__init__(f"syntax error at offset {offset}: {detail}")

    def caret(self):
        """Two-line diagnostic with a caret under the offending byte."""
        raw = self.source.encode("utf-8")
        col = len(raw[: self.offset].decode("utf-8", errors="replace"))
        return f"{self.source}\n{' ' * col}^"


class UnknownFunctionError(ExprSyntaxError):
    pass


class DomainError(PhaseIntegralError, ValueError):
    """Evaluation outside the real domain of a subexpression (pole, log of
    a non-positive number, ...)."""

    def __init__(self, message, subexpression=None):
        self.subexpression = subexpression
        if subexpression is not None:
            message = f"{message} in `{subexpression}`"
        super().__init__(message)


class UnboundParameterError(PhaseIntegralError, KeyError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unbound parameter {name!r}")

    def __str__(self):
        return self.args[0]


class PotentialError(PhaseIntegralError, ValueError):
    """Bad potential family, missing parameter or inconsistent derivatives."""


class GuardError(PhaseIntegralError, ValueError):
    """Evaluation at or across a turning point, in a classically forbidden
    region (Q^2 <= guard) or at a singular point."""


class BreakdownError(PhaseIntegralError, ArithmeticError):
    """The third-order effective momentum became non-positive."""

    def __init__(self, message, z=None):
        self.z = z
        super().__init__(message)


class QuadratureError(PhaseIntegralError, ArithmeticError):
    """Adaptive quadrature exhausted its evaluation budget."""


class TurningPointCountError(PhaseIntegralError, ValueError):
    """The classically allowed region is not bounded by two turning points."""


class NoAllowedRegionError(TurningPointCountError):
    """No classically allowed region at all for the requested energy."""


class BracketError(PhaseIntegralError, ValueError):
    """Root bracket without a sign change."""


class OracleError(PhaseIntegralError, ArithmeticError):
    """Reference ODE integration failed (step-size underflow, ...)."""
