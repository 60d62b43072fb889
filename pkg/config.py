"""
Configuration management for the cyclic-symbol engine.

This module provides:
- Pydantic-validated settings with type safety
- Environment variable loading (prefix CYCLIC_) with proper defaults
- Optional .env file support through pydantic-settings
- A small, deterministic settings object under pytest

Usage:
    from config import get_settings

    settings = get_settings()
    p = settings.engine.default_prime
    trials = settings.check.trials
"""
import os
import logging
from typing import List, Optional
from functools import lru_cache

from pydantic import BaseModel, Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from exceptions import InvalidConfigValueError

logger = logging.getLogger(__name__)

SUPPORTED_PRIMES = (2, 3, 5)
VALID_LOG_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}


def _get_env(key: str, default: Optional[str] = None) -> Optional[str]:
    """
    Get a CYCLIC_-prefixed environment variable with case-insensitive fallback.

    Args:
        key: The variable name without prefix (e.g. "DEFAULT_PRIME")
        default: Default value if not found

    Returns:
        The environment variable value or default
    """
    name = f"CYCLIC_{key}"
    for candidate in (name, name.upper(), name.lower()):
        value = os.getenv(candidate)
        if value is not None:
            return value
    return default


class EngineSettings(BaseModel):
    """Limits on the arithmetic the engine accepts."""

    default_prime: int = Field(
        default=2,
        ge=2,
        le=5,
        description="Characteristic used when --prime is omitted"
    )
    max_indeterminates: int = Field(
        default=6,
        ge=1,
        le=8,
        description="Largest number of indeterminates a field context may declare"
    )
    max_level: int = Field(
        default=3,
        ge=1,
        le=4,
        description="Largest Witt length m accepted from user input"
    )
    max_expression_length: int = Field(
        default=4000,
        ge=16,
        le=100_000,
        description="Maximum characters in one input expression"
    )
    max_exponent: int = Field(
        default=10_000,
        ge=1,
        le=1_000_000,
        description="Largest absolute exponent accepted after '^' in input expressions"
    )

    @field_validator("default_prime")
    @classmethod
    def validate_default_prime(cls, v: int) -> int:
        """Only desk-scale primes are supported."""
        if v not in SUPPORTED_PRIMES:
            raise InvalidConfigValueError("default_prime", v, "must be one of 2, 3, 5")
        return v


class CheckSettings(BaseModel):
    """Property-suite settings for the check subcommand."""

    trials: int = Field(
        default=200,
        ge=1,
        le=10_000,
        description="Random trials per property suite"
    )
    seed: int = Field(
        default=0,
        description="Seed for the randomized suites"
    )
    max_workers: int = Field(
        default=4,
        description="Thread pool size for independent trials"
    )

    @field_validator("max_workers")
    @classmethod
    def validate_max_workers(cls, v: int) -> int:
        """Clamp the worker count into 1..16."""
        if v < 1 or v > 16:
            clamped = min(max(v, 1), 16)
            logger.warning(f"max_workers={v} out of range, using {clamped}")
            return clamped
        return v


class LoggingSettings(BaseModel):
    """Logging configuration."""

    level: str = Field(default="WARNING", description="Root log level")
    json_output: bool = Field(default=False, description="Emit JSON log lines")
    service_name: str = Field(default="cyclic-symbols", description="Service field in JSON logs")

    @field_validator("level")
    @classmethod
    def validate_level(cls, v: str) -> str:
        """Normalise the level name, defaulting to WARNING."""
        if v.upper() not in VALID_LOG_LEVELS:
            logger.warning(f"Invalid log level '{v}', defaulting to 'WARNING'")
            return "WARNING"
        return v.upper()


class Settings(BaseSettings):
    """
    Main engine settings with Pydantic validation.

    Attributes:
        engine: Arithmetic limits
        check: Property-suite settings
        logging: Logging configuration
        app_env: Environment name (development/testing/production)
    """

    model_config = SettingsConfigDict(
        env_prefix="CYCLIC_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore"
    )

    app_env: str = Field(default="development")

    engine: EngineSettings = Field(default_factory=EngineSettings)
    check: CheckSettings = Field(default_factory=CheckSettings)
    logging: LoggingSettings = Field(default_factory=LoggingSettings)

    def get_config_warnings(self) -> List[str]:
        """Get list of configuration warnings."""
        warnings = []

        if self.check.trials < 200 and not self.is_testing():
            warnings.append(
                f"check.trials={self.check.trials} is below the 200 trials the ring suites expect."
            )

        if self.engine.max_level > 3:
            warnings.append(
                "engine.max_level above 3 leaves the range where form reduction is known to terminate quickly."
            )

        return warnings

    def is_testing(self) -> bool:
        """Check if running in test environment."""
        return bool(os.getenv("PYTEST_CURRENT_TEST") or os.getenv("TESTING"))


def _load_settings_from_env() -> Settings:
    """
    Load settings from CYCLIC_* environment variables.

    Handles the mapping from flat env vars to the nested models.
    """
    engine = EngineSettings(
        default_prime=int(_get_env("DEFAULT_PRIME", "2")),
        max_indeterminates=int(_get_env("MAX_INDETERMINATES", "6")),
        max_level=int(_get_env("MAX_LEVEL", "3")),
        max_expression_length=int(_get_env("MAX_EXPRESSION_LENGTH", "4000")),
        max_exponent=int(_get_env("MAX_EXPONENT", "10000")),
    )

    check = CheckSettings(
        trials=int(_get_env("CHECK_TRIALS", "200")),
        seed=int(_get_env("CHECK_SEED", "0")),
        max_workers=int(_get_env("CHECK_MAX_WORKERS", "4")),
    )

    log_settings = LoggingSettings(
        level=_get_env("LOG_LEVEL", "WARNING"),
        json_output=_get_env("LOG_JSON", "false").lower() in ("1", "true", "yes"),
        service_name=_get_env("SERVICE_NAME", "cyclic-symbols"),
    )

    return Settings(
        app_env=_get_env("APP_ENV", "development"),
        engine=engine,
        check=check,
        logging=log_settings,
    )


class MockSettings(Settings):
    """Mock settings for testing environment: fixed seed, few trials."""

    def __init__(self):
        super().__init__(
            app_env="testing",
            engine=EngineSettings(),
            check=CheckSettings(
                trials=int(os.getenv("CYCLIC_CHECK_TRIALS", "20")),
                seed=0,
                max_workers=2,
            ),
            logging=LoggingSettings(level="DEBUG"),
        )


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """
    Get engine settings (cached).

    Returns MockSettings in test environment, otherwise settings from the environment.
    """
    if os.getenv("PYTEST_CURRENT_TEST") or os.getenv("TESTING"):
        return MockSettings()
    return _load_settings_from_env()
