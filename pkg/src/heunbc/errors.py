"""Exception hierarchy.

Two roots matter to the CLI: ``PreconditionError`` (bad input, exit 2) and
``VerificationError`` (a checked invariant failed, exit 3).
"""


class HeunError(Exception):
    """Base class for all library errors."""


class PreconditionError(HeunError, ValueError):
    """Inputs violate an operation's precondition."""


class VerificationError(HeunError):
    """A numerical invariant exceeded its tolerance."""


class DegenerateParameterError(PreconditionError):
    """Pochhammer pole or other parameter degeneracy."""


class DegenerateWeightError(PreconditionError):
    """Vanishing divisor in the weight recursion or a Gamma pole."""

    def __init__(self, msg, k=None):
        super().__init__(msg)
        self.k = k


class InvalidReversalError(PreconditionError):
    pass


class UndefinedRootsError(PreconditionError):
    pass


class ZeroDivisorError(PreconditionError, ZeroDivisionError):
    pass


class SingularPointError(PreconditionError):
    pass


class NonNormalizedError(PreconditionError):
    pass


class ConfigurationError(PreconditionError):
    pass


class ConstraintViolation(PreconditionError):
    pass


class IntegrabilityError(PreconditionError):
    pass


class InsufficientTruncationError(PreconditionError):
    pass


class DiagnosticUndefinedError(PreconditionError):
    pass


class NonTerminatingError(PreconditionError):
    pass


class EvaluationError(HeunError):
    """Non-finite integrand value at a quadrature node."""

    def __init__(self, msg, index=None):
        super().__init__(msg)
        self.index = index


class DegenerateIntegralError(HeunError):
    """Fredholm integral vanishes at every sample point."""

    def __init__(self, msg, ratio=None):
        super().__init__(msg)
        self.ratio = ratio


class ConvergenceError(HeunError):
    """Iteration cap reached; ``best`` holds the last iterate."""

    def __init__(self, msg, best=None):
        super().__init__(msg)
        self.best = best


class InvariantViolation(VerificationError):
    pass
