"""
Custom exception handler and exception classes.

Every failure raised by the services carries the exit status the command
line reports for it: 1 for usage/configuration problems, 2 for bad input
data, 3 for numerical failures.
"""

from django.core.management import CommandError
import logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3


class TrichonetError(Exception):
    """Base class of every error raised by the services."""
    default_detail = 'An error occurred.'
    default_code = 'error'
    exit_code = EXIT_NUMERICAL

    def __init__(self, detail=None, code=None):
        self.detail = detail if detail is not None else self.default_detail
        self.code = code if code is not None else self.default_code
        super().__init__(self.detail)


class ParameterError(TrichonetError):
    """Raised when model parameters violate their invariants."""
    default_detail = 'Invalid model parameters.'
    default_code = 'invalid_parameters'
    exit_code = EXIT_USAGE


class DomainError(TrichonetError):
    """Raised when an argument lies outside the support of an evaluator."""
    default_detail = 'Argument outside the supported domain.'
    default_code = 'out_of_domain'
    exit_code = EXIT_USAGE


class ConfigurationError(TrichonetError):
    """Raised for inconsistent run configuration (stability bound, horizons, flags)."""
    default_detail = 'Invalid configuration.'
    default_code = 'invalid_configuration'
    exit_code = EXIT_USAGE


class DataError(TrichonetError):
    """Raised when an input file is malformed or empty."""
    default_detail = 'Invalid input data.'
    default_code = 'invalid_data'
    exit_code = EXIT_DATA

    def __init__(self, detail=None, code=None, line=None, path=None):
        self.line = line
        self.path = path
        if detail is not None and line is not None:
            detail = f"line {line}: {detail}"
        if detail is not None and path is not None:
            detail = f"{path}: {detail}"
        super().__init__(detail, code)


class EmptyInputError(DataError):
    """Raised when an input file holds no usable records."""
    default_detail = 'Input contains no records.'
    default_code = 'empty_input'


class FitError(TrichonetError):
    """Raised when a fitting phase has too little data to fit."""
    default_detail = 'Degenerate fitting segment.'
    default_code = 'fit_failed'
    exit_code = EXIT_DATA

    def __init__(self, detail=None, code=None, phase=None):
        self.phase = phase
        if detail is not None and phase is not None:
            detail = f"[{phase}] {detail}"
        super().__init__(detail, code)


class NumericalError(TrichonetError):
    """Raised when a computation produces non-finite or unusable values."""
    default_detail = 'Numerical failure.'
    default_code = 'numerical_failure'
    exit_code = EXIT_NUMERICAL


class ServiceError(TrichonetError):
    """Generic service layer error."""
    default_detail = 'A service error occurred.'
    default_code = 'service_error'
    exit_code = EXIT_NUMERICAL


def command_exception_handler(exc, context=None):
    """
    Log an exception raised while running a management command and turn it
    into a CommandError with the matching exit status.

    Unknown exceptions are logged with their traceback and reported as
    numerical failures.
    """
    context = context or {}

    if isinstance(exc, CommandError):
        return exc

    if isinstance(exc, TrichonetError):
        logger.error(
            f"Command failed: {exc.__class__.__name__} - {exc.detail}",
            extra={'context': context}
        )
        return CommandError(f"{exc.code}: {exc.detail}", returncode=exc.exit_code)

    logger.exception(
        f"Unhandled exception: {exc.__class__.__name__} - {str(exc)}",
        extra={'context': context}
    )
    wrapped = ServiceError(f"{exc.__class__.__name__}: {exc}")
    return CommandError(f"{wrapped.code}: {wrapped.detail}", returncode=wrapped.exit_code)
