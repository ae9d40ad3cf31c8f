"""Tests for number-field invariants, K-group tables and fixture loading."""

import json

import pytest
from mpmath import mp, mpf

from src.errors import MissingDataError, ParseError, UnsupportedDegreeError
from src.fields.cohomology import KGroupTable, borel_rank, weil_etale_table
from src.fields.embeddings import check_discriminant_det, embedding_matrix
from src.fields.invariants import (
    FieldSpec,
    betti_ranks,
    class_number,
    field_discriminant,
    field_invariants,
    fundamental_unit,
    reduced_forms,
    regulator,
    roots_of_unity,
    signature,
    squarefree_part,
    trace_form_cokernel_order,
)
from src.fields.loader import FIXTURE_ORDER, find_field, load_fields, load_invariants, load_kgroup_tables


# --- discriminant and signature ---


@pytest.mark.parametrize(
    "poly, disc",
    [((5, 0, 1), -20), ((1, 0, 1), -4), ((1, 1, 1), -3), ((-2, 0, 1), 8), ((-1, -1, 1), 5), ((0, 1), 1)],
)
def test_field_discriminant(poly, disc):
    """d for d ≡ 1 mod 4, 4d otherwise, 1 for ℚ."""
    assert field_discriminant(FieldSpec.of("F", poly)) == disc


def test_squarefree_part_keeps_sign():
    """-20 = -5 · 2^2."""
    assert squarefree_part(-20) == -5
    assert squarefree_part(72) == 2
    with pytest.raises(ValueError):
        squarefree_part(0)


def test_signature_of_quadratic_fields():
    """Real fields have two real places, imaginary fields one complex place."""
    assert signature(FieldSpec.of("Q_sqrt2", (-2, 0, 1))) == (2, 0)
    assert signature(FieldSpec.of("Q_sqrt-5", (5, 0, 1))) == (0, 1)
    assert signature(FieldSpec.of("Q", (0, 1))) == (1, 0)


def test_signature_of_a_cubic_counts_real_roots():
    """x^3 - 2 has one real root."""
    assert signature(FieldSpec.of("Q_cbrt2", (-2, 0, 0, 1))) == (1, 1)


def test_roots_of_unity():
    """Only ℚ(i) and ℚ(√-3) have more than ±1."""
    assert roots_of_unity(FieldSpec.of("Q_i", (1, 0, 1))) == 4
    assert roots_of_unity(FieldSpec.of("Q_sqrt-3", (1, 1, 1))) == 6
    assert roots_of_unity(FieldSpec.of("Q_sqrt-5", (5, 0, 1))) == 2


@pytest.mark.parametrize("r", range(-4, 7))
def test_betti_ranks_sum_to_degree(r):
    """a_r + b_r = [F:ℚ] for a real and a complex field."""
    for r1, r2 in ((2, 0), (0, 1), (1, 0)):
        ranks = betti_ranks(r1, r2, r)
        assert ranks.a + ranks.b == r1 + 2 * r2
        assert ranks.a == (r2 if r % 2 == 0 else r1 + r2)


def test_trace_form_cokernel_order():
    """Tr(O_F) = ℤ when d ≡ 1 mod 4, 2ℤ otherwise."""
    assert trace_form_cokernel_order(FieldSpec.of("Q_sqrt5", (-1, -1, 1))) == 1
    assert trace_form_cokernel_order(FieldSpec.of("Q_sqrt-5", (5, 0, 1))) == 2


# --- class numbers and units ---


def test_reduced_forms_of_minus_23():
    """x^2 + xy + 6y^2 and 2x^2 ± xy + 3y^2."""
    assert sorted(reduced_forms(-23)) == [(1, 1, 6), (2, -1, 3), (2, 1, 3)]


def test_reduced_forms_reject_positive_discriminant():
    """Only negative discriminants have positive definite forms."""
    with pytest.raises(ValueError):
        reduced_forms(8)


@pytest.mark.parametrize(
    "poly, h",
    [((1, 0, 1), 1), ((5, 0, 1), 2), ((6, -1, 1), 3), ((-2, 0, 1), 1), ((-1, -1, 1), 1)],
)
def test_class_numbers(poly, h):
    """Form counts for imaginary fields, rounded analytic values for real ones."""
    assert class_number(FieldSpec.of("F", poly)) == h


def test_fundamental_units():
    """1 + √2 and the golden ratio."""
    assert fundamental_unit(FieldSpec.of("Q_sqrt2", (-2, 0, 1))) == (1, 1)
    assert fundamental_unit(FieldSpec.of("Q_sqrt5", (-1, -1, 1))) == (0, 1)
    assert fundamental_unit(FieldSpec.of("Q_sqrt-5", (5, 0, 1))) is None


def test_regulator_of_real_quadratic_field():
    """R = log(1 + √2)."""
    with mp.workprec(200):
        assert abs(regulator(FieldSpec.of("Q_sqrt2", (-2, 0, 1)), 128) - mp.log(1 + mp.sqrt(2))) < mpf(10) ** -35


def test_regulator_is_one_without_units():
    """Unit rank 0 gives R = 1."""
    assert regulator(FieldSpec.of("Q_i", (1, 0, 1))) == 1


def test_cubic_without_ingested_invariants_is_unsupported():
    """Degree 3 needs every invariant from the data file."""
    with pytest.raises(UnsupportedDegreeError):
        field_invariants(FieldSpec.of("Q_cbrt2", (-2, 0, 0, 1)))


# --- shipped fixtures ---


def test_fixtures_load_in_order(fields):
    """Every shipped field loads and the order is stable."""
    assert list(fields) == list(FIXTURE_ORDER)


def test_fixture_invariants(fields):
    """Spot values of the shipped fixtures."""
    assert (fields["Q_sqrt-5"].discriminant, fields["Q_sqrt-5"].h, fields["Q_sqrt-5"].w) == (-20, 2, 2)
    assert fields["Q_sqrt-23"].h == 3
    assert fields["Q_i"].w == 4
    assert fields["Q_sqrt-3"].w == 6
    assert fields["Q_sqrt5"].unit_rank == 1
    assert fields["Q"].degree == 1


def test_find_field_rejects_unknown_label(tmp_data_dir):
    """Unknown labels are a data error naming the fields directory."""
    with pytest.raises(ParseError, match="unknown field"):
        find_field(tmp_data_dir, "Q_sqrt-7")


def test_malformed_json_reports_line(tmp_data_dir):
    """A truncated file names the path and a line."""
    path = tmp_data_dir / "fields" / "Q_i.json"
    path.write_text('{\n  "format": 1,\n  "label": "Q_i",\n', encoding="utf-8")
    with pytest.raises(ParseError) as info:
        load_fields(tmp_data_dir)
    assert info.value.path == str(path)
    assert info.value.line is not None


def test_non_monic_polynomial_is_a_parse_error(tmp_data_dir):
    """Schema violations carry the offending field."""
    path = tmp_data_dir / "fields" / "Q_i.json"
    path.write_text(json.dumps({"format": 1, "label": "Q_i", "poly": [1, 0, 2]}, indent=2), encoding="utf-8")
    with pytest.raises(ParseError) as info:
        load_fields(tmp_data_dir)
    assert info.value.field == "poly"
    assert info.value.line == 4


def test_inconsistent_ingested_class_number(tmp_data_dir):
    """An ingested h that disagrees with the computed one names the file."""
    path = tmp_data_dir / "fields" / "Q_sqrt-5.json"
    data = json.loads(path.read_text(encoding="utf-8"))
    data["h"] = 3
    path.write_text(json.dumps(data, indent=2), encoding="utf-8")
    loaded = find_field(tmp_data_dir, "Q_sqrt-5")
    with pytest.raises(ParseError) as info:
        load_invariants(loaded)
    assert info.value.path == str(path)
    assert info.value.field == "h"


def test_duplicate_kgroup_index(tmp_data_dir):
    """Two entries for the same K_n are rejected."""
    path = tmp_data_dir / "kgroups" / "Z.json"
    data = json.loads(path.read_text(encoding="utf-8"))
    data["groups"].append(dict(data["groups"][0]))
    path.write_text(json.dumps(data, indent=2), encoding="utf-8")
    with pytest.raises(ParseError, match="duplicate"):
        load_kgroup_tables(tmp_data_dir)


# --- K-groups and Weil-étale cohomology ---


def test_borel_ranks():
    """K_3 of ℚ(√-5) has rank r2, K_5 of ℚ rank r1 + r2, even K-groups rank 0."""
    assert borel_rank(3, 0, 1) == 1
    assert borel_rank(3, 1, 0) == 0
    assert borel_rank(5, 1, 0) == 1
    assert borel_rank(4, 2, 0) == 0
    with pytest.raises(ValueError):
        borel_rank(1, 1, 0)


def test_shipped_ktable_matches_borel(fields, ktables):
    """Every tabulated rank of K_n(ℤ) obeys the Borel rule."""
    assert ktables["Q"].borel_mismatches(fields["Q"]) == []
    assert ktables["Q"].get(3).torsion == 48
    assert ktables["Q"].get(7).torsion == 240


def test_missing_kgroup_is_missing_data():
    """Absent entries raise MissingDataError with the index."""
    with pytest.raises(MissingDataError) as info:
        KGroupTable.empty("Q_sqrt-5").get(3)
    assert info.value.index == 3


def test_weil_etale_table_at_zero(fields):
    """H^2 has rank u and order h, H^3 = μ^D."""
    table = weil_etale_table(fields["Q_sqrt-5"], 0)
    assert (table[2].rank, table[2].torsion) == (0, 2)
    assert table[3].torsion == 2
    assert table[1].torsion == 1
    assert all(entry.up_to_2_torsion for entry in table.entries)


def test_weil_etale_table_for_Q_at_two(fields, ktables):
    """H^1 = K_3(ℤ) = ℤ/48, with the table's source."""
    table = weil_etale_table(fields["Q"], 2, ktables["Q"])
    assert table[1].torsion == 48
    assert table.sources


# --- embeddings ---


def test_embedding_matrix_shape(fields):
    """One row per embedding."""
    assert embedding_matrix(fields["Q_sqrt5"]).shape == (2, 2)
    assert embedding_matrix(fields["Q"]).shape == (1, 1)


@pytest.mark.parametrize("label", FIXTURE_ORDER)
def test_discriminant_determinant(fields, label):
    """det(σ_i(b_j))^2 = d_F on every fixture."""
    report = check_discriminant_det(fields[label])
    assert report.passed, report.notes
