"""
Input validation and sanitization for command-line inputs.

Validators return (is_valid, value, error_message) tuples; the CLI turns
failures into ParseErrors.
"""
import re
import logging
from typing import List, Optional, Sequence, Tuple

from config import get_settings

logger = logging.getLogger(__name__)

SUPPORTED_PRIMES = (2, 3, 5)
IDENTIFIER = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


def sanitize_expression(text: str, max_length: Optional[int] = None) -> Tuple[bool, str, Optional[str]]:
    """
    Strip control characters and surrounding whitespace, and enforce the length limit.

    Args:
        text: Raw expression text
        max_length: Limit in characters (engine.max_expression_length by default)

    Returns:
        Tuple of (is_valid, sanitized_text, error_message)
    """
    if text is None:
        return False, "", "Expression cannot be empty"
    if max_length is None:
        max_length = get_settings().engine.max_expression_length

    # newlines and tabs are whitespace in the grammar
    sanitized = re.sub(r"[\x00-\x08\x0B-\x0C\x0E-\x1F\x7F]", "", text).strip()
    if not sanitized:
        return False, "", "Expression cannot be empty"
    if len(sanitized) > max_length:
        return False, sanitized, f"Expression must be no more than {max_length} characters"
    if len(sanitized) != len(text.strip()):
        logger.warning(f"Removed {len(text.strip()) - len(sanitized)} control character(s) from input")
    return True, sanitized, None


def validate_prime(value) -> Tuple[bool, Optional[int], Optional[str]]:
    """
    Validate a prime given on the command line.

    Returns:
        Tuple of (is_valid, prime, error_message)
    """
    try:
        p = int(value)
    except (TypeError, ValueError):
        return False, None, f"Prime must be an integer, got {value!r}"
    if p not in SUPPORTED_PRIMES:
        return False, None, f"Invalid prime {p}. Must be one of: {', '.join(map(str, SUPPORTED_PRIMES))}"
    return True, p, None


def validate_variables(names: Sequence[str], max_count: Optional[int] = None) -> Tuple[bool, Optional[List[str]], Optional[str]]:
    """
    Validate a list of indeterminate names.

    Args:
        names: Names, or a single comma-separated string
        max_count: Limit on the number of names (engine.max_indeterminates by default)

    Returns:
        Tuple of (is_valid, names, error_message)
    """
    if isinstance(names, str):
        names = [n.strip() for n in names.split(",") if n.strip()]
    names = list(names)
    if max_count is None:
        max_count = get_settings().engine.max_indeterminates

    if not names:
        return False, None, "At least one indeterminate is required"
    if len(names) > max_count:
        return False, None, f"At most {max_count} indeterminates are supported"
    for name in names:
        if not IDENTIFIER.match(name):
            return False, None, f"Invalid indeterminate name '{name}'"
    if len(set(names)) != len(names):
        return False, None, "Indeterminate names must be distinct"
    return True, names, None


def validate_level(level, max_level: Optional[int] = None) -> Tuple[bool, Optional[int], Optional[str]]:
    """Validate a Witt length given directly (as for --length)."""
    if max_level is None:
        max_level = get_settings().engine.max_level
    try:
        level = int(level)
    except (TypeError, ValueError):
        return False, None, f"Length must be an integer, got {level!r}"
    if not 1 <= level <= max_level:
        return False, None, f"Length must be between 1 and {max_level}"
    return True, level, None


def validate_exponent(value, max_exponent: Optional[int] = None) -> Tuple[bool, Optional[int], Optional[str]]:
    """Validate an exponent literal; negative exponents are bounded by absolute value."""
    if max_exponent is None:
        max_exponent = get_settings().engine.max_exponent
    try:
        value = int(value)
    except (TypeError, ValueError):
        return False, None, f"Exponent must be an integer, got {value!r}"
    if abs(value) > max_exponent:
        return False, None, f"Exponent {value} exceeds the limit of {max_exponent}"
    return True, value, None
