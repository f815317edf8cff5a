"""Exception types shared across the package."""


class GoldilocksError(Exception):
    """Base class for all package errors."""


class DomainError(GoldilocksError, ValueError):
    """An argument lies outside the supported domain."""


class ConvergenceError(GoldilocksError, RuntimeError):
    """A numerical scheme failed to reach its tolerance.

    ``best_estimate`` holds whatever the scheme had computed when it gave up.
    """

    def __init__(self, message, best_estimate=None):
        super().__init__(message)
        self.best_estimate = best_estimate


class NoOptimumError(GoldilocksError):
    """The objective is flat, so there is nothing to maximize."""


class SamplingError(GoldilocksError, RuntimeError):
    """A Monte Carlo sample violated a bound that holds by construction."""
