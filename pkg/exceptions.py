"""
Custom exception hierarchy for the cyclic-symbol engine.

This module provides a structured exception hierarchy that enables:
- Precise error handling per layer (parsing, arithmetic, forms, symbols)
- Structured context (positions, stuck terms, step indices) for reports
- A stable mapping from exception type to CLI exit code

Usage:
    from exceptions import NotReducibleError, ParseError

    try:
        solution = solve_pi(beta, x, p, m)
    except NotReducibleError as e:
        logger.error(f"Reduction stalled: {e.context['term']}")
"""

from typing import Optional, Dict, Any
from enum import Enum


class ErrorCode(Enum):
    """Standardized error codes for categorization and reporting."""

    # Parse Errors (1000-1999)
    PARSE_UNKNOWN = 1000
    PARSE_SYNTAX = 1001
    PARSE_UNKNOWN_INDETERMINATE = 1002
    PARSE_DEGREE = 1003
    PARSE_OMEGA_LENGTH = 1004
    PARSE_INVALID_INPUT = 1005

    # Arithmetic Errors (2000-2999)
    ARITH_UNKNOWN = 2000
    ARITH_DIVISION_BY_ZERO = 2001
    ARITH_POLE = 2002
    ARITH_NON_UNIT = 2003
    ARITH_MISMATCH = 2004
    ARITH_NON_INTEGRAL = 2005
    ARITH_NOT_A_POWER = 2006
    ARITH_CHARACTERISTIC = 2007

    # de Rham-Witt Form Errors (3000-3999)
    FORMS_UNKNOWN = 3000
    FORMS_NOT_REDUCIBLE = 3001
    FORMS_DEGENERATE_SHIFT = 3002

    # Symbol Calculus Errors (4000-4999)
    SYMBOL_UNKNOWN = 4000
    SYMBOL_PATTERN_MISMATCH = 4001
    SYMBOL_UNSUPPORTED_WITNESS = 4002
    SYMBOL_DEGENERATE_DELTA = 4003
    SYMBOL_INVALID = 4004

    # Realization Errors (5000-5999)
    REALIZE_UNKNOWN = 5000
    REALIZE_UNSUPPORTED = 5001

    # Configuration Errors (6000-6999)
    CONFIG_UNKNOWN = 6000
    CONFIG_INVALID_VALUE = 6001


class SymbolEngineError(Exception):
    """
    Base exception for all engine errors.

    Attributes:
        message: Human-readable error message
        code: ErrorCode enum for categorization
        context: Additional context dictionary
        original_error: The underlying exception, if any
    """

    default_code = ErrorCode.PARSE_UNKNOWN

    def __init__(
        self,
        message: str,
        code: Optional[ErrorCode] = None,
        context: Optional[Dict[str, Any]] = None,
        original_error: Optional[Exception] = None
    ):
        self.message = message
        self.code = code or self.default_code
        self.context = context or {}
        self.original_error = original_error

        detailed_message = f"[{self.code.name}] {message}"
        if context:
            detailed_message += f" | Context: {context}"

        super().__init__(detailed_message)

    def to_dict(self) -> Dict[str, Any]:
        """Convert exception to dictionary for logging/serialization."""
        return {
            "error_type": self.__class__.__name__,
            "message": self.message,
            "code": self.code.name,
            "code_value": self.code.value,
            "context": {k: str(v) for k, v in self.context.items()},
            "original_error": str(self.original_error) if self.original_error else None
        }

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(message={self.message!r}, code={self.code.name})"


# =============================================================================
# Parse Exceptions
# =============================================================================

class ParseError(SymbolEngineError):
    """Base exception for malformed user input."""
    default_code = ErrorCode.PARSE_UNKNOWN


class ExpressionSyntaxError(ParseError):
    """Raised when an expression does not match the grammar."""
    default_code = ErrorCode.PARSE_SYNTAX

    def __init__(
        self,
        message: str,
        position: Optional[int] = None,
        text: Optional[str] = None,
        **kwargs
    ):
        self.position = position
        context = kwargs.pop("context", {})
        if position is not None:
            context["position"] = position
            message = f"{message} at position {position}"
        if text is not None:
            context["text"] = text[:120]
        super().__init__(message, context=context, **kwargs)


class UnknownIndeterminateError(ParseError):
    """Raised when an expression names an indeterminate the field does not declare."""
    default_code = ErrorCode.PARSE_UNKNOWN_INDETERMINATE

    def __init__(self, name: str, declared: Optional[tuple] = None, **kwargs):
        self.name = name
        context = kwargs.pop("context", {})
        context["name"] = name
        if declared is not None:
            context["declared"] = ",".join(declared)
        super().__init__(f"Unknown indeterminate '{name}'", context=context, **kwargs)


class InvalidDegreeError(ParseError):
    """Raised when a symbol subscript is not a power of the declared prime."""
    default_code = ErrorCode.PARSE_DEGREE


class OmegaLengthError(ParseError):
    """Raised when a symbol's Witt vector length disagrees with its degree."""
    default_code = ErrorCode.PARSE_OMEGA_LENGTH


class InvalidInputError(ParseError):
    """Raised when CLI input fails validation before parsing."""
    default_code = ErrorCode.PARSE_INVALID_INPUT


# =============================================================================
# Arithmetic Exceptions
# =============================================================================

class ArithmeticDomainError(SymbolEngineError):
    """Base exception for exact-arithmetic failures."""
    default_code = ErrorCode.ARITH_UNKNOWN


class DivisionByZeroError(ArithmeticDomainError):
    """Raised on inversion of zero or division by the zero polynomial."""
    default_code = ErrorCode.ARITH_DIVISION_BY_ZERO


class PoleError(ArithmeticDomainError):
    """Raised when a denominator vanishes at an evaluation point."""
    default_code = ErrorCode.ARITH_POLE

    def __init__(self, message: str = "Denominator vanishes at assignment", assignment=None, **kwargs):
        context = kwargs.pop("context", {})
        if assignment is not None:
            context["assignment"] = dict(assignment)
        super().__init__(message, context=context, **kwargs)


class NonUnitError(ArithmeticDomainError):
    """Raised when inverting a Witt vector whose first coordinate is zero."""
    default_code = ErrorCode.ARITH_NON_UNIT


class MismatchedParametersError(ArithmeticDomainError):
    """Raised when operands disagree on prime, length or field."""
    default_code = ErrorCode.ARITH_MISMATCH


class NonIntegralCoefficientError(ArithmeticDomainError):
    """Raised when a universal Witt polynomial has a non-integral coefficient."""
    default_code = ErrorCode.ARITH_NON_INTEGRAL


class NotAPowerError(ArithmeticDomainError):
    """Raised when a p-th root is requested of an element that is not a p-th power."""
    default_code = ErrorCode.ARITH_NOT_A_POWER


class CharacteristicError(ArithmeticDomainError):
    """Raised when an operation is used in the wrong characteristic."""
    default_code = ErrorCode.ARITH_CHARACTERISTIC


# =============================================================================
# de Rham-Witt Form Exceptions
# =============================================================================

class FormsError(SymbolEngineError):
    """Base exception for 1-form reduction failures."""
    default_code = ErrorCode.FORMS_UNKNOWN


class NotReducibleError(FormsError):
    """Raised when a term cannot be written over d[generator] with the rule set."""
    default_code = ErrorCode.FORMS_NOT_REDUCIBLE

    def __init__(self, message: str, term: Optional[str] = None, **kwargs):
        self.term = term
        context = kwargs.pop("context", {})
        if term is not None:
            context["term"] = term
        super().__init__(message, context=context, **kwargs)


class DegenerateShiftError(FormsError):
    """Raised when beta + x^(p^m) vanishes."""
    default_code = ErrorCode.FORMS_DEGENERATE_SHIFT


# =============================================================================
# Symbol Calculus Exceptions
# =============================================================================

class SymbolCalculusError(SymbolEngineError):
    """Base exception for rewrite failures on cyclic symbols."""
    default_code = ErrorCode.SYMBOL_UNKNOWN


class InvalidSymbolError(SymbolCalculusError):
    """Raised when a symbol violates its invariants (zero beta, length mismatch)."""
    default_code = ErrorCode.SYMBOL_INVALID


class PatternMismatchError(SymbolCalculusError):
    """Raised when a rule is applied to factors that do not match its pattern."""
    default_code = ErrorCode.SYMBOL_PATTERN_MISMATCH

    def __init__(self, message: str, rule: Optional[str] = None, target: Optional[int] = None, **kwargs):
        self.rule = rule
        self.target = target
        context = kwargs.pop("context", {})
        if rule is not None:
            context["rule"] = rule
        if target is not None:
            context["target"] = target
        super().__init__(message, context=context, **kwargs)


class UnsupportedWitnessError(SymbolCalculusError):
    """Raised when a norm-twist witness is not a p^m-th power."""
    default_code = ErrorCode.SYMBOL_UNSUPPORTED_WITNESS


class DegenerateDeltaError(SymbolCalculusError):
    """Raised when the neat-pair shift produces delta = 0."""
    default_code = ErrorCode.SYMBOL_DEGENERATE_DELTA

    def __init__(self, message: str = "Degenerate shift: delta = 0", step_index: Optional[int] = None, **kwargs):
        self.step_index = step_index
        context = kwargs.pop("context", {})
        if step_index is not None:
            context["step_index"] = step_index
        super().__init__(message, context=context, **kwargs)


# =============================================================================
# Realization Exceptions
# =============================================================================

class RealizationError(SymbolEngineError):
    """Base exception for structure-constant realization failures."""
    default_code = ErrorCode.REALIZE_UNKNOWN


class UnsupportedRealizationError(RealizationError):
    """Raised for (p, m) pairs outside the realizable range."""
    default_code = ErrorCode.REALIZE_UNSUPPORTED


# =============================================================================
# Configuration Exceptions
# =============================================================================

class ConfigurationError(SymbolEngineError):
    """Base exception for all configuration-related errors."""
    default_code = ErrorCode.CONFIG_UNKNOWN


class InvalidConfigValueError(ConfigurationError):
    """Raised when a configuration value is invalid."""
    default_code = ErrorCode.CONFIG_INVALID_VALUE

    def __init__(
        self,
        key: str,
        value: Any,
        reason: Optional[str] = None,
        **kwargs
    ):
        self.key = key
        self.value = value
        msg = f"Invalid configuration value for '{key}': {value}"
        if reason:
            msg += f" ({reason})"
        context = kwargs.pop("context", {})
        context["key"] = key
        context["value_type"] = type(value).__name__
        super().__init__(msg, context=context, **kwargs)


# =============================================================================
# Utility Functions
# =============================================================================

def wrap_exception(
    exception: Exception,
    wrapper_class: type = SymbolEngineError,
    message: Optional[str] = None
) -> SymbolEngineError:
    """
    Wrap a generic exception in a typed SymbolEngineError.

    Args:
        exception: The original exception
        wrapper_class: The wrapper exception class
        message: Optional custom message (default: uses original exception message)

    Returns:
        A properly typed exception
    """
    if isinstance(exception, SymbolEngineError):
        return exception

    msg = message or str(exception)
    return wrapper_class(msg, original_error=exception)
