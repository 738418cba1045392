"""Exception hierarchy.

Each class carries the CLI exit code it maps to: 2 for bad input,
3 for domain or precondition failures, 4 for solver failures.
"""


class BohrError(Exception):
    exit_code = 3


class ValidationError(BohrError, ValueError):
    """Malformed or inconsistent input (files, literals, arguments)."""

    exit_code = 2


class ParseError(ValidationError):
    pass


class DomainError(BohrError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class RangeError(DomainError):
    """Integer outside the factorizable range of the prime table."""


class NonInvertibleError(DomainError):
    pass


class PreconditionError(DomainError):
    pass


class StructureError(DomainError):
    """A coefficient-structure assumption failed; ``violations`` lists counterexamples."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class UnsupportedError(DomainError):
    pass


class SolverError(BohrError, RuntimeError):
    exit_code = 4
