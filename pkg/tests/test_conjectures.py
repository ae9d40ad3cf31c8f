"""Tests for special-value predictions, Gamma duality, D-cohomology and the check registry."""

import random
from dataclasses import replace
from fractions import Fraction

import pytest

from src.conjectures.cohomology import (
    BOREL_FALLBACK,
    alternating_rank,
    check_D_cohomology,
    describe_D_cohomology,
    verify_soule_order,
)
from src.conjectures.hodge import (
    COMPLEX,
    REAL,
    HodgeData,
    check_complex_place_gamma_duality,
    check_gamma_shift_identity,
    check_real_place_gamma_duality,
    duality_ratio,
    random_hodge_data,
    real_place_closed_form,
)
from src.conjectures.predictions import (
    EXPLICIT,
    REQUIRES_REGULATOR,
    check_class_number_euler_characteristic,
    check_gamma_factor_reduction,
    predict_r0,
    predict_special_value,
    verify_class_number,
    verify_r0,
    verify_r1,
    verify_special_value,
)
from src.conjectures.registry import (
    DEFAULT_R_RANGE,
    SKIPPED_NOTE,
    STATUSES,
    CheckContext,
    build_tasks,
    full_report,
    get_check,
    list_checks,
    report_passed,
)
from src.errors import MissingDataError
from src.fields.cohomology import KGroupTable
from src.zeta.hurwitz import EvalPrecision

REGISTERED = {
    "class-number",
    "residue",
    "special-value",
    "soule-order",
    "gamma-factor-reduction",
    "functional-equation",
    "embedding-det",
    "t-complex",
    "d-cohomology",
    "euler-characteristic",
    "gamma",
    "hodge",
    "exact-sequences",
    "dold-kan",
}


@pytest.fixture(scope="module")
def precision() -> EvalPrecision:
    return EvalPrecision.from_config(256)


def _small_sweeps(cfg):
    sweeps = replace(
        cfg.sweeps,
        exact_sequences=5,
        hodge=5,
        lemma_instances=5,
        complexes=3,
        short_exact_sequences=3,
        functional_equation_points=3,
        gamma_points=5,
    )
    return replace(cfg, sweeps=sweeps)


# --- r = 0 and r = 1 ---


@pytest.mark.parametrize("label", ["Q", "Q_i", "Q_sqrt-3", "Q_sqrt-5", "Q_sqrt-23", "Q_sqrt2", "Q_sqrt5"])
def test_class_number_formula_at_zero(fields, precision, label):
    """|ζ*(F, 0)| = hR/w with the right vanishing order."""
    report = verify_r0(fields[label], precision)
    assert report.passed, report.notes
    assert report.k == 0


@pytest.mark.parametrize("label", ["Q_i", "Q_sqrt-5", "Q_sqrt2", "Q_sqrt5"])
def test_residue_gap_is_two_to_r1(fields, precision, label):
    """The residue and the r = 1 prediction differ by exactly 2^r1."""
    inv = fields[label]
    report = verify_r1(inv, precision)
    assert report.passed, report.notes
    assert report.k == inv.r1


def test_wrong_class_number_fails(fields, precision):
    """h = 3 for ℚ(√-5) is caught by both comparisons."""
    wrong = replace(fields["Q_sqrt-5"], h=3)
    assert not verify_r0(wrong, precision).passed
    assert not verify_class_number(wrong, precision).passed


def test_predict_r0_uses_regulator_only_with_units(fields):
    """ℚ(√-5) has no regulator factor, ℚ(√2) does."""
    assert predict_r0(fields["Q_sqrt-5"]).rational == Fraction(1)
    assert str(predict_r0(fields["Q_sqrt2"])) == "1/2*R"


@pytest.mark.parametrize("label", ["Q_sqrt-5", "Q_sqrt5"])
def test_euler_characteristic_at_zero(fields, precision, label):
    """The r = 0 complex recovers |ζ*(F, 0)|."""
    report = check_class_number_euler_characteristic(fields[label], precision)
    assert report.passed, report.notes


# --- special values away from 0 and 1 ---


def test_prediction_for_Q_at_two(fields, ktables):
    """|K_2| / |K_3| · 2^2 π^2 collapses to π^2/6."""
    prediction = predict_special_value(fields["Q"], 2, ktables["Q"])
    assert prediction.regulator_status == EXPLICIT
    assert prediction.value.rational == Fraction(1, 6)
    assert prediction.value.pi_exponent == 2
    assert len(prediction.sources) == 2


@pytest.mark.parametrize("r", [2, 4, 6])
def test_even_zeta_values_match_K_theory(fields, ktables, precision, r):
    """ζ(2), ζ(4), ζ(6) agree with the prediction exactly, k = 0."""
    verification = verify_special_value(fields["Q"], r, ktables["Q"], precision)
    assert verification.status == "passed", verification.report.notes
    assert verification.report.k == 0
    assert verification.sources


@pytest.mark.parametrize("r", [-1, -3])
def test_negative_odd_values_match_up_to_two(fields, ktables, precision, r):
    """ζ(-1) and ζ(-3) against |K_{-2r}| / |K_{1-2r}|."""
    verification = verify_special_value(fields["Q"], r, ktables["Q"], precision, tol=1e-6)
    assert verification.report.passed, verification.report.notes


def test_odd_value_needs_a_regulator(fields, ktables, precision):
    """ζ(3) needs the rank-1 Borel regulator; the item is informational."""
    prediction = predict_special_value(fields["Q"], 3, ktables["Q"])
    assert prediction.regulator_status == REQUIRES_REGULATOR
    verification = verify_special_value(fields["Q"], 3, ktables["Q"], precision)
    assert verification.status == "informational"
    assert "implied regulator" in verification.report.notes


def test_missing_kgroups_raise(fields):
    """No table for ℚ(√-5): the prediction cannot be formed."""
    with pytest.raises(MissingDataError):
        predict_special_value(fields["Q_sqrt-5"], 2, KGroupTable.empty("Q_sqrt-5"))


def test_predictions_refuse_zero_and_one(fields, ktables):
    """r = 0, 1 have their own formulas."""
    with pytest.raises(ValueError):
        predict_special_value(fields["Q"], 1, ktables["Q"])


@pytest.mark.parametrize("label", ["Q", "Q_i", "Q_sqrt-5", "Q_sqrt2", "Q_sqrt5"])
@pytest.mark.parametrize("r", range(2, 7))
def test_gamma_factor_reduction(fields, label, r):
    """The r prediction reduces to the 1 - r one up to ±2^k, exactly."""
    report = check_gamma_factor_reduction(fields[label], r)
    assert report.passed, report.notes
    assert report.exact


# --- Gamma duality ---


def test_hodge_data_must_be_symmetric():
    """h(0, 2) != h(2, 0) is rejected."""
    with pytest.raises(ValueError):
        HodgeData(3, 2, COMPLEX, {0: 1, 1: 2, 2: 2})


def test_hodge_data_middle_split_must_add_up():
    """h(n,+) + h(n,-) = h(n,n) at a real place."""
    with pytest.raises(ValueError):
        HodgeData(2, 2, REAL, {1: 2}, 2, 1)
    with pytest.raises(ValueError):
        HodgeData(2, 2, COMPLEX, {1: 2}, 1, 1)


def test_dual_hodge_data():
    """h'(d-1-p, d-1-q) = h(p, q) in degree 2d - 2 - j."""
    hodge = HodgeData(3, 1, COMPLEX, {0: 2, 1: 2})
    dual = hodge.dual()
    assert dual.j == 3
    assert dual.h == {2: 2, 1: 2}
    assert dual.dual() == hodge


def test_betti_split_at_real_place():
    """B^+ takes h(n,+) when n is even, h(n,-) when n is odd."""
    hodge = HodgeData(3, 2, REAL, {0: 1, 1: 3, 2: 1}, 2, 1)
    assert hodge.betti == 5
    assert hodge.betti_plus == 1 + 1
    assert hodge.betti_minus == 3
    assert hodge.betti_minus_at(2) == 3
    assert hodge.betti_minus_at(3) == 2


@pytest.mark.parametrize("r", range(-5, 6))
def test_real_place_duality_on_seeded_data(r):
    """The real-place closed form holds for every seeded instance."""
    rng = random.Random(100 + r)
    for _ in range(20):
        hodge = random_hodge_data(rng, REAL)
        report = check_real_place_gamma_duality(hodge, r)
        assert report.passed, report.notes


def test_real_place_closed_form_with_minus_part():
    """Γ_R(s + 1) alone at r = 1: the ratio and the closed form are both π^-1."""
    hodge = HodgeData(1, 0, REAL, {0: 1}, 0, 1)
    ratio, _ = duality_ratio(hodge, 1)
    closed = real_place_closed_form(hodge, 1)
    assert ratio.pi_half_exponent == closed.pi_half_exponent == -2
    assert check_real_place_gamma_duality(hodge, 1).passed


@pytest.mark.parametrize(
    "hodge",
    [
        HodgeData(1, 0, REAL, {0: 1}, 0, 1),
        HodgeData(2, 2, REAL, {1: 3}, 1, 2),
        HodgeData(3, 2, REAL, {0: 1, 1: 3, 2: 1}, 0, 3),
    ],
)
@pytest.mark.parametrize("r", range(-3, 4))
def test_real_place_duality_with_nonzero_minus_part(hodge, r):
    """The closed form holds when h(n,-) > 0."""
    report = check_real_place_gamma_duality(hodge, r)
    assert report.passed, report.notes


@pytest.mark.parametrize("r", range(-5, 6))
def test_complex_place_duality_on_seeded_data(r):
    """The complex-place closed form holds for every seeded instance."""
    rng = random.Random(200 + r)
    for _ in range(20):
        hodge = random_hodge_data(rng, COMPLEX)
        report = check_complex_place_gamma_duality(hodge, r)
        assert report.passed, report.notes


def test_duality_checks_insist_on_place():
    """Real-place data is not accepted by the complex-place check."""
    with pytest.raises(ValueError):
        check_complex_place_gamma_duality(HodgeData(1, 0, REAL, {0: 1}, 1, 0), 2)


def test_gamma_shift_identity():
    """Γ^j(s) = Γ^{2d-2-j}(s + d - j - 1) at seeded points."""
    rng = random.Random(7)
    for _ in range(5):
        hodge = random_hodge_data(rng)
        assert check_gamma_shift_identity(hodge, Fraction(rng.randint(1, 40), 7) + Fraction(1, 3), 128)


# --- D-cohomology ---


def test_D_cohomology_of_Q_at_zero(fields):
    """H^3 = μ^D has order 2."""
    table = describe_D_cohomology(fields["Q"], 0)
    assert table[3].torsion == 2
    assert alternating_rank(table) == 0


def test_D_cohomology_of_Q_at_minus_one(fields, ktables):
    """H^2 is K_2(ℤ)^D of order 2, H^3 is K_3(ℤ)^D of order 48."""
    table = describe_D_cohomology(fields["Q"], -1, ktables["Q"])
    assert table[2].torsion == 2
    assert table[3].torsion == 48
    assert table.sources


def test_D_cohomology_of_Q_sqrt_minus_five_at_two(fields):
    """H^3 = H^1(t(2)) has order |d_F| = 20."""
    table = describe_D_cohomology(fields["Q_sqrt-5"], 2)
    assert table[3].torsion == 20
    assert table[1].torsion is None
    assert BOREL_FALLBACK in table.sources


def test_D_cohomology_closed_form_above_the_limit(fields):
    """For r = 4 the H^3 order is |d_F|^3."""
    assert describe_D_cohomology(fields["Q_sqrt-5"], 4)[3].torsion == 8000


@pytest.mark.parametrize("label", ["Q", "Q_i", "Q_sqrt-3", "Q_sqrt-5", "Q_sqrt-23", "Q_sqrt2", "Q_sqrt5"])
@pytest.mark.parametrize("r", [-3, -1, 0, 1, 4, 5])
def test_D_cohomology_alternating_rank_vanishes(fields, ktables, label, r):
    """Σ (-1)^j rank H^j = 0 in every regime."""
    report = check_D_cohomology(fields[label], r, ktables.get(label))
    assert report.passed, report.notes


@pytest.mark.parametrize("label, r, order", [("Q", -2, 1), ("Q", -1, 0), ("Q_sqrt-5", 0, 0), ("Q_sqrt2", 0, 1)])
def test_soule_order(fields, ktables, precision, label, r, order):
    """Fitted vanishing orders match the rank bookkeeping."""
    report = verify_soule_order(fields[label], r, ktables.get(label), precision)
    assert report.passed, report.notes
    assert report.lhs == str(order)


def test_soule_order_notes_the_borel_fallback(fields, ktables, precision):
    """ℚ(√-5) has no K-group table: the rank of K_3 is the Borel one and the note says so."""
    report = verify_soule_order(fields["Q_sqrt-5"], -1, ktables.get("Q_sqrt-5"), precision)
    assert report.passed, report.notes
    assert "Borel rank rule" in report.notes
    tabulated = verify_soule_order(fields["Q"], -2, ktables["Q"], precision)
    assert "Borel rank rule" not in tabulated.notes


# --- registry ---


def test_registry_lists_every_check():
    """Fourteen checks under stable names."""
    assert {check.name for check in list_checks()} == REGISTERED


def test_unknown_check_is_rejected():
    """get_check names the missing check."""
    with pytest.raises(ValueError, match="Unknown check"):
        get_check("riemann-hypothesis")


def test_task_order_and_fixed_points(fields, ktables, cfg):
    """Fixed-r checks ignore the range; special-value skips 0 and 1."""
    context = CheckContext.from_cli(cfg)
    selected = [fields["Q"], fields["Q_sqrt-5"]]
    tasks = build_tasks(selected, DEFAULT_R_RANGE, ktables, context, ["class-number", "special-value"])
    class_number = [(t.label, t.r) for t in tasks if t.check == "class-number"]
    assert class_number == [("Q", 0), ("Q_sqrt-5", 0)]
    special = [t.r for t in tasks if t.check == "special-value" and t.label == "Q"]
    assert special == [-4, -3, -2, -1, 2, 3, 4, 5, 6]
    assert tasks[0].check == "class-number"


def test_missing_data_becomes_skipped(fields, ktables, cfg):
    """No K-table for ℚ(√-5): skipped, and the batch still passes."""
    document = full_report([fields["Q_sqrt-5"]], [2], ktables, cfg, ["special-value"])
    [item] = document.items
    assert item.status == "skipped"
    assert item.notes.startswith(SKIPPED_NOTE)
    assert report_passed(document)


def test_informational_items_do_not_fail(fields, ktables, cfg):
    """ζ'(-2) needs a regulator: informational, not failed."""
    document = full_report([fields["Q"]], [-2], ktables, cfg, ["special-value"])
    assert [item.status for item in document.items] == ["informational"]
    assert report_passed(document)


def test_exceptions_become_error_items(fields, ktables, cfg):
    """A field without an integral basis errors in embedding-det without aborting."""
    broken = replace(fields["Q_sqrt5"], radicand=None)
    document = full_report([broken, fields["Q"]], [], ktables, cfg, ["embedding-det"])
    assert [item.status for item in document.items] == ["error", "passed"]
    assert "PrecisionError" in document.items[0].notes
    assert not report_passed(document)


def test_failed_item(fields, ktables, cfg):
    """A wrong class number fails the class-number check."""
    wrong = replace(fields["Q_sqrt-5"], h=3)
    document = full_report([wrong], [], ktables, cfg, ["class-number"])
    assert document.items[0].status == "failed"
    assert document.totals["failed"] == 1
    assert set(document.totals) == set(STATUSES)


def test_sweeps_pass_and_are_deterministic(fields, ktables, cfg):
    """Same seed, same report; every property sweep passes."""
    small = _small_sweeps(cfg)
    names = ["gamma", "hodge", "exact-sequences", "dold-kan"]
    first = full_report([], [], ktables, small, names)
    second = full_report([], [], ktables, small, names)
    assert first.model_dump() == second.model_dump()
    assert [item.field for item in first.items] == ["-"] * 4
    assert all(item.status == "passed" for item in first.items), [item.notes for item in first.items]

def test_rng_streams_depend_on_labels(cfg):
    """Streams are keyed by seed and labels."""
    context = CheckContext.from_cli(cfg)
    assert context.rng("hodge").random() == context.rng("hodge").random()
    assert context.rng("hodge").random() != context.rng("gamma").random()


def test_prediction_log_ratio_is_exact(fields, ktables, precision):
    """ζ(-1) = -1/12 against 1/24 is off by exactly one power of two."""
    verification = verify_special_value(fields["Q"], -1, ktables["Q"], precision)
    assert verification.report.k == 1
    assert abs(verification.report.log2_ratio - 1) < 1e-12
