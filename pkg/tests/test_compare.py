"""Tests for comparisons up to sign and powers of two."""

from pathlib import Path

import pytest
from mpmath import mpf

from src.compare import compare_exact, compare_integers, compare_up_to_sign_and_two
from src.errors import ZeroComparandError
from src.gamma.values import ExactGammaValue

SRC_DIR = Path(__file__).parent.parent / "src"

# --- comparisons ---


def test_compare_detects_power_of_two():
    """|3| / |-12| = 2^-2."""
    report = compare_up_to_sign_and_two(mpf(3), mpf(-12))
    assert report.passed
    assert report.k == -2


def test_compare_rejects_non_power_of_two():
    """3 / 5 is not ±2^k."""
    assert not compare_up_to_sign_and_two(mpf(3), mpf(5)).passed


def test_compare_refuses_zero():
    """Zero operands cannot be compared modulo powers of two."""
    with pytest.raises(ZeroComparandError):
        compare_up_to_sign_and_two(mpf(0), mpf(1))


def test_compare_exact_names_pi_mismatch():
    """π against 1 fails with a note."""
    report = compare_exact(ExactGammaValue.pi_power(2), ExactGammaValue.rational(1))
    assert not report.passed
    assert "pi exponents differ" in report.notes
    assert report.exact


def test_compare_integers():
    """Equal integers pass with k = 0."""
    assert compare_integers(20, 20).k == 0
    assert not compare_integers(20, 8).passed



# --- layering ---


@pytest.mark.parametrize("package", ["gamma", "linalg", "simplicial", "fields", "zeta"])
def test_lower_layers_do_not_import_conjectures(package):
    """Only the CLI and the conjecture suite itself depend on src.conjectures."""
    for path in (SRC_DIR / package).glob("*.py"):
        assert "src.conjectures" not in path.read_text(encoding="utf-8"), path
