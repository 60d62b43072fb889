"""
Error classification and recovery utilities.

This module provides:
- Severity classification for the engine's exception hierarchy
- CLI exit-code mapping (0 success, 1 domain error, 2 usage/parse error)
- A redraw decorator for randomized checks that hit a pole
- Structured logging for errors

Usage:
    from error_handling import redraw_on, exit_code_for
    from exceptions import PoleError

    @redraw_on((PoleError,), attempts=5)
    def evaluate_at_random_point():
        ...
"""
import logging
from typing import Callable, Any, Optional, TypeVar, Tuple, Dict, Type
from functools import wraps
from enum import Enum

from exceptions import (
    SymbolEngineError,
    ParseError,
    ArithmeticDomainError,
    NonIntegralCoefficientError,
    PoleError,
    FormsError,
    SymbolCalculusError,
    RealizationError,
    ConfigurationError,
)

logger = logging.getLogger(__name__)

T = TypeVar('T')

EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_USAGE_ERROR = 2


class ErrorSeverity(Enum):
    """Error severity levels for logging."""
    LOW = "low"        # Bad input, user can fix
    MEDIUM = "medium"  # Mathematical outcome (stalled reduction, degenerate shift)
    HIGH = "high"      # Unsupported request
    CRITICAL = "critical"  # Engine bug (non-integral universal polynomial)


def redraw_on(
    exceptions: Tuple[Type[Exception], ...] = (PoleError,),
    attempts: int = 4,
    on_retry: Optional[Callable[[int, Exception], None]] = None
):
    """
    Call the wrapped function again when it raises one of `exceptions`.

    Meant for closures that draw their own random input, so each call is a
    fresh draw. The last exception is re-raised once `attempts` calls failed.

    Args:
        exceptions: Exception types that trigger another draw
        attempts: Total number of calls, at least 1
        on_retry: Called with (failed call number, exception) before each redraw
    """
    if attempts < 1:
        raise ValueError(f"attempts must be at least 1, got {attempts}")

    def decorator(func: Callable[..., T]) -> Callable[..., T]:
        @wraps(func)
        def wrapper(*args, **kwargs) -> T:
            for call in range(1, attempts + 1):
                try:
                    return func(*args, **kwargs)
                except exceptions as e:
                    if call == attempts:
                        logger.debug(f"{func.__name__}: giving up after {attempts} draws")
                        raise
                    logger.debug(f"{func.__name__}: draw {call} failed ({e}), redrawing")
                    if on_retry:
                        on_retry(call, e)

        return wrapper
    return decorator

class ErrorHandler:
    """Centralized error handling."""

    @staticmethod
    def describe(error: Exception) -> str:
        """
        Render an exception as a one-line message for the CLI.

        Args:
            error: The exception that occurred

        Returns:
            User-facing message
        """
        if isinstance(error, SymbolEngineError):
            message = f"{type(error).__name__}: {error.message}"
            if error.context:
                details = ", ".join(f"{k}={v}" for k, v in error.context.items())
                message += f" ({details})"
            return message
        return f"{type(error).__name__}: {error}"

    @staticmethod
    def log_error(
        error: Exception,
        severity: Optional[ErrorSeverity] = None,
        context: Optional[Dict[str, Any]] = None
    ):
        """
        Log a failed command at a level matching its severity.

        Engine bugs get a traceback; parse errors are logged at INFO since
        the CLI already reports them to the user.

        Args:
            error: The exception
            severity: Error severity level (classified when omitted)
            context: Extra fields, attached to JSON log records
        """
        severity = severity or get_exception_severity(error)
        level = {
            ErrorSeverity.CRITICAL: logging.CRITICAL,
            ErrorSeverity.HIGH: logging.ERROR,
            ErrorSeverity.MEDIUM: logging.WARNING,
        }.get(severity, logging.INFO)
        extra = {"severity": severity.value, **(context or {})}
        if isinstance(error, SymbolEngineError):
            extra["error_code"] = error.code.name
        logger.log(
            level,
            f"{severity.value} severity: {ErrorHandler.describe(error)}",
            extra=extra,
            exc_info=severity == ErrorSeverity.CRITICAL,
        )


# =============================================================================
# Exception Severity Mapping
# =============================================================================

EXCEPTION_SEVERITY_MAP: Dict[Type[Exception], ErrorSeverity] = {
    NonIntegralCoefficientError: ErrorSeverity.CRITICAL,

    RealizationError: ErrorSeverity.HIGH,
    ConfigurationError: ErrorSeverity.HIGH,

    FormsError: ErrorSeverity.MEDIUM,
    SymbolCalculusError: ErrorSeverity.MEDIUM,
    ArithmeticDomainError: ErrorSeverity.MEDIUM,

    ParseError: ErrorSeverity.LOW,
}


def get_exception_severity(exception: Exception) -> ErrorSeverity:
    """
    Get the severity level for an exception.

    Args:
        exception: The exception to classify

    Returns:
        ErrorSeverity enum value
    """
    for exc_type, severity in EXCEPTION_SEVERITY_MAP.items():
        if isinstance(exception, exc_type):
            return severity
    return ErrorSeverity.MEDIUM


def exit_code_for(exception: Optional[BaseException]) -> int:
    """
    Map an outcome to a CLI exit code.

    Args:
        exception: The raised exception, or None on success

    Returns:
        0 on success, 2 for usage and parse errors, 1 for domain errors
    """
    if exception is None:
        return EXIT_OK
    if isinstance(exception, (ParseError, ConfigurationError)):
        return EXIT_USAGE_ERROR
    if isinstance(exception, SystemExit):
        return EXIT_USAGE_ERROR if exception.code else EXIT_OK
    return EXIT_DOMAIN_ERROR


def format_error_context(
    exception: Exception,
    operation: str,
    **additional_context
) -> Dict[str, Any]:
    """
    Format error context for logging and JSON error payloads.

    Args:
        exception: The exception
        operation: Name of the operation that failed
        **additional_context: Additional context values

    Returns:
        Structured context dictionary
    """
    context = {
        "operation": operation,
        "exception_type": type(exception).__name__,
        "message": str(exception),
        "severity": get_exception_severity(exception).value,
        "exit_code": exit_code_for(exception),
    }

    if isinstance(exception, SymbolEngineError):
        context["error_code"] = exception.code.name
        context["error_code_value"] = exception.code.value
        context.update({k: str(v) for k, v in exception.context.items()})

    context.update(additional_context)
    return context
