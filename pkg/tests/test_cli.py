"""Tests for the command-line interface, driven through main(argv)."""

import json

import pytest

from src.cli.main import EXIT_DATA, EXIT_FAILED, EXIT_OK, EXIT_USAGE, build_parser, main
from src.cli.render import REPORT_COLUMNS

from tests.conftest import DATA_DIR


@pytest.fixture(autouse=True)
def _shipped_data(monkeypatch):
    """Point every run at the shipped fixtures unless a test passes --data-dir."""
    monkeypatch.setenv("ZW_DATA_DIR", str(DATA_DIR))


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# --- listing and field info ---


def test_checks_lists_registered_names(capsys):
    """`checks` prints every registered check."""
    code, out, _ = _run(capsys, "checks")
    assert code == EXIT_OK
    assert "class-number" in out
    assert "dold-kan" in out


def test_field_info_as_json(capsys):
    """`field --format json` emits one object per field."""
    code, out, _ = _run(capsys, "field", "--field", "Q_sqrt-5", "--format", "json")
    assert code == EXIT_OK
    [row] = json.loads(out)
    assert (row["discriminant"], row["h"], row["w"]) == (-20, 2, 2)


def test_field_info_lists_every_fixture(capsys):
    """Without --field every fixture is shown."""
    code, out, _ = _run(capsys, "field", "--format", "csv")
    assert code == EXIT_OK
    assert len(out.strip().splitlines()) == 1 + 7


def test_unknown_field_is_a_data_error(capsys):
    """Unknown labels exit 3."""
    code, _, err = _run(capsys, "field", "--field", "Q_sqrt-7")
    assert code == EXIT_DATA
    assert "unknown field" in err


# --- zeta ---


def test_zeta_value(capsys):
    """ζ(2) = 1.6449..."""
    code, out, _ = _run(capsys, "zeta", "--field", "Q", "--s", "2", "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["value"].startswith("1.644934066848226436")


def test_zeta_at_negative_rational(capsys):
    """Negative points are passed as --s=-3/2."""
    code, out, _ = _run(capsys, "zeta", "--field", "Q", "--s=-3/2", "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["s"] == "-3/2"


def test_zeta_leading_term(capsys):
    """ζ*(ℚ, -1) = -1/12 with order 0."""
    code, out, _ = _run(capsys, "zeta", "--field", "Q", "--leading", "-1", "--format", "json")
    assert code == EXIT_OK
    summary = json.loads(out)
    assert summary["order"] == 0
    assert summary["leading"].startswith("-0.083333333333")


def test_zeta_needs_a_point(capsys):
    """--s or --leading is required."""
    code, _, _ = _run(capsys, "zeta", "--field", "Q")
    assert code == EXIT_USAGE


def test_zeta_rejects_non_rational(capsys):
    """--s must parse as a fraction."""
    code, _, _ = _run(capsys, "zeta", "--field", "Q", "--s", "two")
    assert code == EXIT_USAGE


# --- verify and report ---


def test_verify_class_number(capsys):
    """class-number passes on ℚ(√-5) and prints totals."""
    code, out, _ = _run(capsys, "verify", "class-number", "--field", "Q_sqrt-5", "--jobs", "1")
    assert code == EXIT_OK
    assert "totals: passed 1" in out


def test_verify_special_value_as_csv(capsys):
    """CSV output starts with the report columns."""
    code, out, _ = _run(
        capsys, "verify", "special-value", "--field", "Q", "--r", "2", "--format", "csv", "--jobs", "1"
    )
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == ",".join(REPORT_COLUMNS)
    assert lines[1].startswith("special-value,Q,2,passed,0,")


def test_unknown_check_is_a_usage_error(capsys):
    """argparse rejects unregistered names."""
    code, _, _ = _run(capsys, "verify", "riemann-hypothesis")
    assert code == EXIT_USAGE


def test_report_rejects_all_with_check(capsys):
    """--all and --check are exclusive."""
    code, _, _ = _run(capsys, "report", "--all", "--check", "gamma")
    assert code == EXIT_USAGE


def test_json_report_is_byte_identical(capsys):
    """Same seed, same bytes."""
    argv = ("verify", "functional-equation", "--field", "Q", "--format", "json", "--seed", "9", "--jobs", "1")
    first = _run(capsys, *argv)
    second = _run(capsys, *argv)
    assert first[0] == EXIT_OK
    assert first[1] == second[1]
    document = json.loads(first[1])
    assert document["seed"] == 9
    assert document["items"][0]["check"] == "functional-equation"


def test_parallel_report_matches_inline(capsys):
    """Item order does not depend on the worker count."""
    argv = ("report", "--check", "embedding-det", "--check", "residue", "--format", "json")
    inline = _run(capsys, *argv, "--jobs", "1")
    pooled = _run(capsys, *argv, "--jobs", "2")
    assert inline[0] == pooled[0] == EXIT_OK
    assert inline[1] == pooled[1]


# --- configuration and data errors ---


@pytest.mark.parametrize("flag, value", [("--prec", "32"), ("--tol", "0"), ("--tol", "0.5"), ("--jobs", "0")])
def test_invalid_settings_exit_three(capsys, flag, value):
    """Out-of-range settings are configuration errors."""
    code, _, err = _run(capsys, "checks", flag, value)
    assert code == EXIT_DATA
    assert "data error" in err


def test_corrupted_kgroup_table_exits_three(capsys, tmp_data_dir):
    """A malformed K-group file names its path."""
    path = tmp_data_dir / "kgroups" / "Z.json"
    path.write_text("{ not json", encoding="utf-8")
    code, _, err = _run(capsys, "verify", "class-number", "--field", "Q", "--data-dir", str(tmp_data_dir))
    assert code == EXIT_DATA
    assert str(path) in err


def test_wrong_kgroup_torsion_fails_the_check(capsys, tmp_data_dir):
    """|K_3(ℤ)| = 49 breaks the ζ(2) prediction: exit 1."""
    path = tmp_data_dir / "kgroups" / "Z.json"
    data = json.loads(path.read_text(encoding="utf-8"))
    for group in data["groups"]:
        if group["n"] == 3:
            group["torsion"] = 49
    path.write_text(json.dumps(data, indent=2), encoding="utf-8")
    code, out, _ = _run(
        capsys, "verify", "special-value", "--field", "Q", "--r", "2", "--data-dir", str(tmp_data_dir), "--jobs", "1"
    )
    assert code == EXIT_FAILED
    assert "failed" in out


def test_parser_accepts_all_as_check():
    """`verify all` selects every check."""
    args = build_parser().parse_args(["verify", "all", "--r", "2"])
    assert args.check == "all"
    assert args.r == 2
