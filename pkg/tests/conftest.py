"""
Shared pytest fixtures for the cyclic-symbol engine test suite.

IMPORTANT: Environment variables must be set before any project imports.
"""
import os

# Set test environment BEFORE any other imports
os.environ["TESTING"] = "1"
os.environ.setdefault("CYCLIC_CHECK_TRIALS", "10")

import random

import pytest


@pytest.fixture(autouse=True)
def reset_settings_cache():
    """Each test sees freshly loaded settings."""
    from config import get_settings
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng():
    """Seeded random source."""
    return random.Random(20240501)


@pytest.fixture
def f2_t():
    """F_2(t)."""
    from ring_base import FieldContext
    return FieldContext(2, ("t",))


@pytest.fixture
def f2_ts():
    """F_2(t, s)."""
    from ring_base import FieldContext
    return FieldContext(2, ("t", "s"))


@pytest.fixture
def f3_ts():
    """F_3(t, s)."""
    from ring_base import FieldContext
    return FieldContext(3, ("t", "s"))


@pytest.fixture
def f5_ts():
    """F_5(t, s)."""
    from ring_base import FieldContext
    return FieldContext(5, ("t", "s"))


@pytest.fixture
def f2_bx():
    """F_2(beta, x), the field of the symbolic shift examples."""
    from ring_base import FieldContext
    return FieldContext(2, ("beta", "x"))


@pytest.fixture
def f2_six():
    """F_2 in six indeterminates."""
    from ring_base import FieldContext
    return FieldContext(2, ("t", "s", "u", "v", "w", "z"))


@pytest.fixture
def parse(request):
    """Parser bound to a field: parse(ctx, "t + s")."""
    from expression_parser import parse_elem
    return lambda ctx, text: parse_elem(text, ctx)
