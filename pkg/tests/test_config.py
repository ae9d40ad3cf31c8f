"""Tests for app.yml loading, run-setting overrides and logging setup."""

import logging
from pathlib import Path

import pytest

from src.config import build_cli_config, get_config, reset_config, resolve_data_dir
from src.errors import ConfigError
from src.logging_setup import configure_logging


@pytest.fixture(autouse=True)
def _fresh_config(monkeypatch):
    monkeypatch.delenv("ZW_DATA_DIR", raising=False)
    reset_config()
    yield
    reset_config()


def test_app_config_defaults():
    """app.yml ships the documented defaults."""
    app = get_config()
    assert app.precision_bits == 256
    assert 0 < app.tolerance < 0.5
    assert app.output_format == "text"
    assert app.zeta.ladder_points == 5
    assert app.simplicial.truncation_guard == 2
    assert app.sweeps.hodge > 0


def test_get_config_is_cached():
    """The singleton is reused until reset."""
    assert get_config() is get_config()
    first = get_config()
    reset_config()
    assert get_config() is not first


def test_overrides_take_precedence():
    """Explicit values replace app.yml ones."""
    cfg = build_cli_config(precision_bits=128, tolerance=1e-6, seed=3, output_format="json", jobs=2)
    assert (cfg.precision_bits, cfg.tolerance, cfg.seed, cfg.output_format, cfg.parallelism) == (
        128, 1e-6, 3, "json", 2,
    )
    assert cfg.zeta is get_config().zeta


@pytest.mark.parametrize(
    "overrides",
    [{"precision_bits": 63}, {"tolerance": 0.0}, {"tolerance": 0.5}, {"output_format": "xml"}, {"jobs": 0}],
)
def test_invalid_overrides_raise(overrides):
    """validate() rejects unusable settings."""
    with pytest.raises(ConfigError):
        build_cli_config(**overrides)


def test_data_dir_from_app_yml_is_project_relative():
    """The relative app.yml path resolves against the project root."""
    path = resolve_data_dir()
    assert path.is_absolute()
    assert (path / "fields").is_dir()


def test_data_dir_from_environment(monkeypatch, tmp_path):
    """ZW_DATA_DIR beats app.yml."""
    monkeypatch.setenv("ZW_DATA_DIR", str(tmp_path))
    assert resolve_data_dir() == tmp_path


def test_explicit_data_dir_wins(monkeypatch, tmp_path):
    """A --data-dir flag beats the environment."""
    monkeypatch.setenv("ZW_DATA_DIR", "/nonexistent")
    assert resolve_data_dir(str(tmp_path)) == Path(tmp_path)


def test_configure_logging_sets_level():
    """The level name is applied to the root logger."""
    configure_logging("DEBUG")
    assert logging.getLogger().level == logging.DEBUG
    configure_logging()
    assert logging.getLogger().level == logging.WARNING
