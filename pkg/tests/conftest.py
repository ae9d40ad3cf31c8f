"""Shared pytest fixtures for the workbench test suite."""

import random
import shutil
from pathlib import Path

import pytest

from src.config import CliConfig, build_cli_config, reset_config
from src.fields.cohomology import KGroupTable
from src.fields.invariants import FieldInvariants
from src.fields.loader import load_fields, load_invariants, load_kgroup_tables

# The fixtures shipped with the repository.
DATA_DIR = Path(__file__).parent.parent / "data"

# Precision used by every test that does not exercise precision itself.
TEST_PRECISION_BITS = 256


@pytest.fixture(scope="session")
def fields() -> dict[str, FieldInvariants]:
    """Label -> invariants for every shipped fixture field."""
    return {
        loaded.label: load_invariants(loaded, TEST_PRECISION_BITS)
        for loaded in load_fields(DATA_DIR)
    }


@pytest.fixture(scope="session")
def ktables() -> dict[str, KGroupTable]:
    """Label -> K-group table for every shipped table (only Q)."""
    return load_kgroup_tables(DATA_DIR)


@pytest.fixture
def rng() -> random.Random:
    """A fixed-seed generator so property tests are repeatable."""
    return random.Random(1234)


@pytest.fixture
def cfg(monkeypatch) -> CliConfig:
    """Run settings pointing at the shipped data, inline execution, small sweeps."""
    monkeypatch.delenv("ZW_DATA_DIR", raising=False)
    reset_config()
    return build_cli_config(data_dir=str(DATA_DIR), jobs=1)


@pytest.fixture
def tmp_data_dir(tmp_path) -> Path:
    """A writable copy of data/ that a test may corrupt."""
    target = tmp_path / "data"
    shutil.copytree(DATA_DIR, target)
    return target
