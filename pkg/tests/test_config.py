"""
Tests for config module.
"""

import math

import pytest
from pydantic import ValidationError

from infolattice.config import (
    DIST_TOLERANCE,
    EXACT_TOLERANCE,
    InputKind,
    OutputFormat,
    RunConfig,
    parse_log_base,
)


def test_defaults() -> None:
    """Test the default run configuration."""
    config = RunConfig()
    assert config.kind is InputKind.PMF
    assert config.log_base == 2.0
    assert config.tol_exact == EXACT_TOLERANCE == 1e-12
    assert config.tol_dist == DIST_TOLERANCE == 1e-9
    assert config.max_n == 20
    assert config.output_format is OutputFormat.TABLE
    assert config.unit == "bits"


def test_log_base_parsing() -> None:
    """Test numeric and natural log bases."""
    assert parse_log_base("e") == math.e
    assert parse_log_base(" E ") == math.e
    assert parse_log_base("10") == 10.0
    assert RunConfig(log_base="e").unit == "nats"
    assert RunConfig(log_base="10").unit == "log10 units"
    with pytest.raises(ValueError):
        parse_log_base("ten")


@pytest.mark.parametrize(
    "settings",
    [
        {"tol_exact": 0.0},
        {"tol_dist": -1e-9},
        {"max_n": 0},
        {"log_base": "1"},
        {"log_base": "-2"},
        {"log_base": "x"},
        {"log_base": "nan"},
        {"log_base": "inf"},
    ],
)
def test_invalid_settings(settings: dict[str, object]) -> None:
    """Test that invalid settings are rejected by validation."""
    with pytest.raises(ValidationError):
        RunConfig(**settings)


def test_config_is_frozen() -> None:
    """Test that a built configuration cannot be changed."""
    config = RunConfig()
    with pytest.raises(ValidationError):
        config.max_n = 3  # type: ignore[misc]
