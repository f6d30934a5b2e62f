"""Exception hierarchy shared by the numerical modules and the CLI."""

from __future__ import annotations


class NamaError(Exception):
    """Base class for every error raised by nama."""


class DomainError(NamaError, ValueError):
    """An argument lies outside the domain of the operation."""


class RangeError(DomainError):
    """A query point lies outside the range covered by a computed solution."""


class ConvergenceError(NamaError, ArithmeticError):
    """A numerical procedure failed to reach its tolerance."""


class BlowUpError(ConvergenceError):
    """The radial solution left the Kahler cone before the requested end point."""

    def __init__(self, t: float, reason: str):
        self.t = t
        self.reason = reason
        super().__init__(f"Solution blew up at t={t:.12g}: {reason}")


class NoRootError(NamaError, ValueError):
    """A bracket handed to a root finder has no sign change."""

    def __init__(self, message: str, lo_value: float, hi_value: float):
        self.lo_value = lo_value
        self.hi_value = hi_value
        super().__init__(message)
