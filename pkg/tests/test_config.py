"""
Tests for configuration management.
"""
import os

import pytest


class TestNestedSettings:
    """Validation of the nested settings groups."""

    def test_engine_defaults(self):
        from config import EngineSettings

        engine = EngineSettings()
        assert engine.default_prime == 2
        assert engine.max_indeterminates == 6
        assert engine.max_level == 3
        assert engine.max_expression_length == 4000
        assert engine.max_exponent == 10_000

    def test_unsupported_prime_raises(self):
        from config import EngineSettings
        from exceptions import InvalidConfigValueError

        with pytest.raises(InvalidConfigValueError) as exc_info:
            EngineSettings(default_prime=4)
        assert exc_info.value.key == "default_prime"

    def test_max_workers_is_clamped(self):
        from config import CheckSettings

        assert CheckSettings(max_workers=64).max_workers == 16
        assert CheckSettings(max_workers=0).max_workers == 1

    def test_log_level_is_normalised(self):
        from config import LoggingSettings

        assert LoggingSettings(level="debug").level == "DEBUG"
        assert LoggingSettings(level="chatty").level == "WARNING"


class TestGetSettings:
    """Environment loading and the test-mode short cut."""

    def test_mock_settings_under_pytest(self):
        from config import MockSettings, get_settings

        settings = get_settings()
        assert isinstance(settings, MockSettings)
        assert settings.check.seed == 0
        assert settings.is_testing()

    def test_get_settings_is_cached(self):
        from config import get_settings

        assert get_settings() is get_settings()

    def test_loads_from_env(self, mocker):
        from config import _load_settings_from_env

        env = {
            "CYCLIC_DEFAULT_PRIME": "3",
            "CYCLIC_MAX_EXPONENT": "500",
            "CYCLIC_CHECK_TRIALS": "50",
            "CYCLIC_CHECK_SEED": "7",
            "CYCLIC_LOG_JSON": "true",
            "CYCLIC_LOG_LEVEL": "info",
        }
        mocker.patch.dict(os.environ, env, clear=True)
        settings = _load_settings_from_env()

        assert settings.engine.default_prime == 3
        assert settings.engine.max_exponent == 500
        assert settings.check.trials == 50
        assert settings.check.seed == 7
        assert settings.logging.json_output is True
        assert settings.logging.level == "INFO"

    def test_config_warnings(self, mocker):
        from config import CheckSettings, EngineSettings, Settings

        mocker.patch.dict(os.environ, {}, clear=True)
        settings = Settings(check=CheckSettings(trials=10), engine=EngineSettings(max_level=4))
        warnings = settings.get_config_warnings()

        assert any("trials" in w for w in warnings)
        assert any("max_level" in w for w in warnings)
