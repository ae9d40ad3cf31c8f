"""Acceptance sweep over the shipped fixtures.

Runs the thirteen acceptance criteria through the check registry, times each
one against its budget and prints [PASS]/[FAIL] per criterion.

Run from the project root:

    python scripts/check_acceptance.py [--jobs N] [--ignore-timing]

Exits 1 if any criterion fails.
"""

import argparse
import sys
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Optional, Sequence

sys.path.insert(0, str(Path(__file__).parent.parent))

from dotenv import load_dotenv

load_dotenv()

from src.config import CliConfig, build_cli_config
from src.conjectures.registry import full_report
from src.fields.invariants import FieldInvariants
from src.fields.loader import load_fields, load_invariants, load_kgroup_tables
from src.logging_setup import configure_logging
from src.models.schemas import ReportDocument, ReportItem

# ------------------------------------------------------------------
# Criteria
# ------------------------------------------------------------------


@dataclass(frozen=True)
class Criterion:
    number: int
    title: str
    check: str
    budget_seconds: float
    r_values: Sequence[int] = ()
    labels: Optional[Sequence[str]] = None
    tolerance: Optional[float] = None
    # extra condition on each item beyond status == "passed"
    item_ok: Optional[Callable[[ReportItem, dict[str, FieldInvariants]], bool]] = None


def _k_is_r1(item: ReportItem, fields: dict[str, FieldInvariants]) -> bool:
    return item.k == fields[item.field].r1


def _k_is_zero(item: ReportItem, fields: dict[str, FieldInvariants]) -> bool:
    return item.k == 0


CRITERIA = (
    Criterion(1, "class number formula at s = 0", "class-number", 30),
    Criterion(2, "residue at s = 1, k = r1", "residue", 30, item_ok=_k_is_r1),
    Criterion(3, "zeta(2), zeta(4), zeta(6) from the K-table", "special-value", 10, (2, 4, 6), ("Q",), item_ok=_k_is_zero),
    Criterion(4, "zeta*(-1), zeta*(-3) up to sign and 2^k", "special-value", 10, (-1, -3), ("Q",), tolerance=1e-6),
    Criterion(5, "Gamma ratio lemma, reflection, duplication", "gamma", 5),
    Criterion(6, "Gamma duality at real and complex places", "hodge", 60),
    Criterion(7, "Gamma-factor reduction for r in [2, 6]", "gamma-factor-reduction", 5, range(2, 7)),
    Criterion(8, "functional equation self-test", "functional-equation", 60),
    Criterion(9, "determinants of based exact sequences", "exact-sequences", 30),
    Criterion(10, "Dold-Kan suite", "dold-kan", 60),
    Criterion(11, "|H^1(t(r))| = |d_F|^(r-1)", "t-complex", 120, (2, 3), ("Q_sqrt-5", "Q_sqrt2", "Q_sqrt-3")),
    Criterion(12, "embedding determinant", "embedding-det", 5),
    Criterion(13, "vanishing orders for r in [-4, 1]", "soule-order", 60, range(-4, 2)),
)


# ------------------------------------------------------------------
# Runner
# ------------------------------------------------------------------


def run_criterion(
    criterion: Criterion,
    fields: dict[str, FieldInvariants],
    ktables: dict,
    cfg: CliConfig,
) -> tuple[ReportDocument, float]:
    selected = [fields[label] for label in criterion.labels] if criterion.labels else list(fields.values())
    if criterion.tolerance is not None:
        cfg = replace(cfg, tolerance=criterion.tolerance)
    start = time.perf_counter()
    document = full_report(selected, criterion.r_values, ktables, cfg, [criterion.check])
    return document, time.perf_counter() - start


def failures(criterion: Criterion, document: ReportDocument, fields: dict[str, FieldInvariants]) -> list[str]:
    problems = []
    if not document.items:
        problems.append("no report items")
    for item in document.items:
        where = f"{item.field} r={item.r}"
        if item.status != "passed":
            problems.append(f"{where}: {item.status} ({item.notes})")
        elif criterion.item_ok and not criterion.item_ok(item, fields):
            problems.append(f"{where}: k = {item.k}")
    return problems


# ------------------------------------------------------------------
# Main
# ------------------------------------------------------------------


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--jobs", type=int, default=None)
    parser.add_argument("--ignore-timing", action="store_true", help="report budgets without failing on them")
    args = parser.parse_args()

    configure_logging()
    try:
        cfg = build_cli_config(jobs=args.jobs)
        fields = {f.label: f for f in (load_invariants(x, cfg.precision_bits) for x in load_fields(cfg.data_dir))}
        ktables = load_kgroup_tables(cfg.data_dir)
    except Exception as exc:
        print(f"[FAIL] Could not load fixtures: {exc}")
        sys.exit(1)

    failed = 0
    for criterion in CRITERIA:
        print(f"Criterion {criterion.number}: {criterion.title}")
        print("-" * 60)
        items = 0
        try:
            document, elapsed = run_criterion(criterion, fields, ktables, cfg)
            items = len(document.items)
            problems = failures(criterion, document, fields)
        except Exception as exc:
            elapsed, problems = 0.0, [f"{type(exc).__name__}: {exc}"]
        over_budget = elapsed > criterion.budget_seconds
        print(f"  Items   : {items}")
        print(f"  Runtime : {elapsed:.2f} s (budget {criterion.budget_seconds:g} s)")
        for problem in problems:
            print(f"    - {problem}")
        if problems or (over_budget and not args.ignore_timing):
            reason = "over budget" if not problems else f"{len(problems)} problem(s)"
            print(f"[FAIL] Criterion {criterion.number}: {reason}")
            failed += 1
        else:
            print(f"[OK] Criterion {criterion.number}")
        print()

    if failed:
        print(f"[FAIL] {failed} of {len(CRITERIA)} acceptance criteria failed.")
        sys.exit(1)
    print(f"[PASS] All {len(CRITERIA)} acceptance criteria passed.")


if __name__ == "__main__":
    main()
