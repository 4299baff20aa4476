"""Exception hierarchy shared across the package.

Exit-code mapping used by the CLI: usage errors exit 2 (argparse),
data/domain errors exit 3, weather-provider errors exit 4.
"""

from __future__ import annotations


class PyroriskError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class DomainError(PyroriskError, ValueError):
    """An input value violates a documented precondition.

    Messages name the offending field, e.g. ``rh_pct=120.0 outside [0, 100]``.
    """

    exit_code = 3


class NotFittedError(PyroriskError, RuntimeError):
    """An estimator was used before ``fit`` was called."""

    exit_code = 3


class ProviderError(PyroriskError):
    """Weather-provider failure."""

    exit_code = 4


class RetryableProviderError(ProviderError):
    """Transient network failure; carries backoff metadata for the caller."""

    def __init__(self, message: str, attempts: int, backoff_s: float):
        super().__init__(message)
        self.attempts = attempts
        self.backoff_s = backoff_s


class PayloadError(ProviderError):
    """Provider payload could not be parsed; ``offset`` locates the failure.

    ``offset`` is a character position for malformed JSON and a day index
    for schema violations inside a well-formed payload.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class FixtureNotFoundError(ProviderError):
    """No recorded fixture matches the requested query."""
