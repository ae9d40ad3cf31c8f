"""Tests for Hurwitz, Dirichlet and Dedekind zeta evaluation and the leading-term extractor."""

import random
from fractions import Fraction

import pytest
from mpmath import mp, mpf

from src.errors import ConfigError, PoleError
from src.fields.cohomology import BOREL_RANK_SOURCE
from src.zeta.dedekind import (
    KroneckerCharacter,
    QuadraticField,
    analytic_residue,
    check_functional_equation,
    completed_phi,
    dedekind_zeta,
    dirichlet_L,
    euler_product,
    functional_equation_points,
    residue_class_number,
    riemann_zeta,
)
from src.zeta.hurwitz import EvalPrecision, hurwitz_zeta, remainder_bound
from src.zeta.leading import (
    expected_vanishing_order,
    fit_slope,
    leading_term,
    neville_at_zero,
    vanishing_order_with_source,
)


@pytest.fixture(scope="module")
def precision() -> EvalPrecision:
    return EvalPrecision.from_config(256)


# --- Hurwitz and Riemann zeta ---


def test_zeta_two(precision):
    """ζ(2) = π^2/6."""
    with mp.workprec(300):
        assert abs(riemann_zeta(2, precision) - mp.pi**2 / 6) < mpf(10) ** -28


@pytest.mark.parametrize("s, expected", [(-1, Fraction(-1, 12)), (0, Fraction(-1, 2)), (-3, Fraction(1, 120))])
def test_zeta_at_nonpositive_integers(precision, s, expected):
    """ζ(-1) = -1/12, ζ(0) = -1/2, ζ(-3) = 1/120."""
    with mp.workprec(300):
        value = riemann_zeta(s, precision)
        assert abs(value - mpf(expected.numerator) / expected.denominator) < mpf(10) ** -28


def test_hurwitz_at_half_is_scaled_riemann(precision):
    """ζ(s, 1/2) = (2^s - 1) ζ(s)."""
    with mp.workprec(300):
        s = Fraction(5, 2)
        expected = (mpf(2) ** mpf(2.5) - 1) * riemann_zeta(s, precision)
        assert abs(hurwitz_zeta(s, Fraction(1, 2), precision) - expected) < mpf(10) ** -27


def test_hurwitz_rejects_pole_and_bad_parameter(precision):
    """s = 1 is a pole; a must lie in (0, 1]."""
    with pytest.raises(PoleError):
        hurwitz_zeta(1, 1, precision)
    with pytest.raises(ValueError):
        hurwitz_zeta(2, Fraction(3, 2), precision)


def test_remainder_bound_is_infinite_far_left():
    """The Euler-Maclaurin bound needs s + 2M - 1 > 0."""
    assert remainder_bound(mpf(-100), mpf(1), 32, 10) == mp.inf


def test_eval_precision_rejects_low_precision():
    """Fewer than 64 working bits is a configuration error."""
    with pytest.raises(ConfigError):
        EvalPrecision.from_config(32)


# --- characters and L-functions ---


def test_kronecker_character_values():
    """χ_-4 = (0, 1, 0, -1); χ_5(2) = -1; χ_8(3) = -1, χ_8(7) = 1."""
    assert KroneckerCharacter(-4).values == (0, 1, 0, -1)
    assert KroneckerCharacter(5)(2) == -1
    assert KroneckerCharacter(8)(3) == -1
    assert KroneckerCharacter(8)(7) == 1
    assert KroneckerCharacter(-20)(10) == 0


def test_l_function_at_one(precision):
    """L(1, χ_-4) = π/4."""
    with mp.workprec(300):
        assert abs(dirichlet_L(1, KroneckerCharacter(-4), precision) - mp.pi / 4) < mpf(10) ** -40


def test_gaussian_zeta_factorises(precision):
    """ζ_ℚ(i)(2) = ζ(2) · Catalan."""
    with mp.workprec(300):
        value = dedekind_zeta(QuadraticField(-4, "Q_i"), 2, precision)
        assert abs(value - mp.pi**2 / 6 * mp.catalan) < mpf(10) ** -27


@pytest.mark.parametrize("label", ["Q", "Q_sqrt-5", "Q_sqrt2"])
def test_euler_product_oracle(fields, precision, label):
    """∏_p local factors approaches ζ_F(3) within the tail bound."""
    inv = fields[label]
    with mp.workprec(300):
        value = dedekind_zeta(inv, 3, precision)
        product, tail = euler_product(inv, 3, 2000, precision)
        assert abs(product - value) <= 2 * tail * value


def test_euler_product_needs_s_above_one(fields, precision):
    """No Euler product at s = 1/2."""
    with pytest.raises(ValueError):
        euler_product(fields["Q"], Fraction(1, 2), 100, precision)


# --- residue at s = 1 ---


@pytest.mark.parametrize("label", ["Q_i", "Q_sqrt-3", "Q_sqrt-5", "Q_sqrt-23", "Q_sqrt2", "Q_sqrt5"])
def test_residue_matches_class_number_formula(fields, precision, label):
    """L(1, χ_d) = 2^r1 (2π)^r2 hR / (w √|d|)."""
    inv = fields[label]
    with mp.workprec(300):
        residue = analytic_residue(inv, precision)
        formula = residue_class_number(inv, inv.h, inv.regulator, inv.w, precision)
        assert abs(residue - formula) < mpf(10) ** -25


# --- completed zeta function ---


def test_completed_phi_poles(fields, precision):
    """φ has poles at 0 and 1, and Γ(s/2) poles at negative even s."""
    with pytest.raises(PoleError):
        completed_phi(fields["Q"], 0, precision)
    with pytest.raises(PoleError):
        completed_phi(fields["Q"], 1, precision)
    with pytest.raises(PoleError):
        completed_phi(fields["Q"], -2, precision)


def test_functional_equation_points_avoid_poles():
    """Seeded points are non-half-integral rationals in (-1.5, 2.5)."""
    points = functional_equation_points(random.Random(5), 40)
    assert len(points) == 40
    assert all(p.denominator > 2 and Fraction(-3, 2) < p < Fraction(5, 2) for p in points)
    assert points == functional_equation_points(random.Random(5), 40)


@pytest.mark.parametrize("label", ["Q", "Q_sqrt-5", "Q_sqrt5"])
def test_functional_equation(fields, precision, label):
    """φ(s) = φ(1 - s) at seeded points."""
    points = functional_equation_points(random.Random(3), 4)
    report = check_functional_equation(fields[label], points, precision)
    assert report.passed, report.notes


# --- leading Laurent terms ---


def test_fit_slope_recovers_a_line():
    """y = 2x + 1 has slope 2 and no residual."""
    slope, residual = fit_slope([mpf(1), mpf(2), mpf(3)], [mpf(3), mpf(5), mpf(7)])
    assert slope == 2
    assert residual == 0


def test_neville_extrapolates_a_quadratic():
    """The parabola through three points is exact at 0."""
    xs = [mpf(1), mpf(2), mpf(3)]
    assert neville_at_zero(xs, [x * x + 3 * x + 5 for x in xs]) == 5


def test_leading_term_at_minus_one(fields, precision):
    """ζ(-1) = -1/12 is a value, not a zero."""
    leading = leading_term(fields["Q"], -1, precision)
    assert leading.order == 0
    assert abs(leading.leading.value + mpf(1) / 12) < mpf(10) ** -15


def test_leading_term_at_the_pole(fields, precision):
    """ζ has a simple pole at 1 with residue 1."""
    leading = leading_term(fields["Q"], 1, precision)
    assert leading.order == -1
    assert abs(leading.leading.value - 1) < mpf(10) ** -15


def test_leading_term_at_trivial_zero(fields, precision):
    """ζ'(-2) = -ζ(3)/(4π^2)."""
    leading = leading_term(fields["Q"], -2, precision)
    assert leading.order == 1
    with mp.workprec(300):
        assert abs(leading.leading.value + mp.zeta(3) / (4 * mp.pi**2)) < mpf(10) ** -15


def test_leading_term_of_real_quadratic_field_at_zero(fields, precision):
    """ζ_F vanishes to order 1 at 0 for ℚ(√5), with leading term -hR/w."""
    inv = fields["Q_sqrt5"]
    leading = leading_term(inv, 0, precision)
    assert leading.order == 1
    assert abs(abs(leading.leading.value) - inv.regulator / 2) < mpf(10) ** -15
    assert "slope" in leading.diagnostics


@pytest.mark.parametrize("r, expected", [(-2, 1), (-1, 0), (0, 0), (1, -1), (3, 0)])
def test_expected_vanishing_order_for_Q(fields, ktables, r, expected):
    """Rank bookkeeping for ℚ with the K(ℤ) table."""
    assert expected_vanishing_order(fields["Q"], r, ktables["Q"]) == expected


def test_expected_vanishing_order_falls_back_to_borel(fields):
    """Without a table, rk K_3 of ℚ(√-5) is r2 = 1."""
    assert expected_vanishing_order(fields["Q_sqrt-5"], -1) == 1


def test_vanishing_order_names_its_rank_source(fields, ktables):
    """Tabulated ranks carry their literature source; untabulated ones say Borel."""
    order, source = vanishing_order_with_source(fields["Q"], -2, ktables["Q"])
    assert order == 1
    assert source == ktables["Q"].get(5).source
    assert vanishing_order_with_source(fields["Q_sqrt-5"], -1) == (1, BOREL_RANK_SOURCE)
    assert vanishing_order_with_source(fields["Q"], 0, ktables["Q"]) == (0, None)
