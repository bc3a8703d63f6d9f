"""Error taxonomy shared across the package.

The split mirrors the CLI exit codes: domain errors are problems with the
data or the requested parameters (exit 3), numeric errors are failures of
an otherwise well-posed computation (exit 4).
"""


class QmatchError(Exception):
    """Base class for all package errors."""


class DomainError(QmatchError, ValueError):
    """Input outside the mathematical domain of an operation."""


class DegenerateFitError(DomainError):
    """The transformed data admit an unbounded likelihood (no interaction
    variation left), so no maximum-likelihood fit exists."""


class NumericError(QmatchError, RuntimeError):
    """A numeric procedure failed to converge or produced too many failed
    evaluations to report a result."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
