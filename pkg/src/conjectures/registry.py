"""Check registry and the batch report.

Every verification registers under a stable kebab-case name. full_report()
enumerates (check, field, r) items in registration order, runs them inline or
on a process pool, and assembles a ReportDocument whose item order never
depends on completion order.

A failing item never aborts the batch:
    MissingDataError   status "skipped", note "skipped: missing data"
    any other error    status "error", note carries the exception
"""

from __future__ import annotations

import abc
import logging
import math
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from src.compare import ComparisonReport, compare_integers
from src.config import CliConfig, SweepConfig, ZetaConfig, get_config
from src.conjectures.cohomology import T_COMPLEX_LIMIT, check_D_cohomology, describe_D_cohomology, verify_soule_order
from src.conjectures.hodge import (
    REAL,
    check_complex_place_gamma_duality,
    check_gamma_shift_identity,
    check_real_place_gamma_duality,
    random_hodge_data,
)
from src.conjectures.predictions import (
    Verification,
    check_class_number_euler_characteristic,
    check_gamma_factor_reduction,
    corroborate_gamma_factor_reduction,
    verify_class_number,
    verify_r0,
    verify_r1,
    verify_residue,
    verify_special_value,
)
from src.errors import MissingDataError
from src.fields.cohomology import KGroupTable
from src.fields.embeddings import check_discriminant_det
from src.fields.invariants import FieldInvariants
from src.gamma.identities import check_duplication, check_gamma_ratio_lemma, check_reflection, random_identity_points
from src.linalg.exact_sequences import determinant_of_exact_sequence, splice
from src.linalg.lemmas import (
    check_kernel_cokernel_lemma,
    check_torsion_determinant_lemma,
    random_exact_sequence,
    random_kernel_cokernel_instance,
    random_torsion_determinant_instance,
)
from src.models.schemas import ReportDocument, ReportItem
from src.simplicial.complexes import random_chain_complex
from src.simplicial.cotangent import check_exterior_power_additivity, check_t_complex_torsion, random_short_exact_presentation
from src.simplicial.dold_kan import derived_exterior_defects, round_trip_defects
from src.zeta.dedekind import check_functional_equation, functional_equation_points
from src.zeta.hurwitz import EvalPrecision
from src.zeta.leading import vanishing_order_with_source

logger = logging.getLogger(__name__)

STATUSES = ("passed", "failed", "skipped", "informational", "error")
SKIPPED_NOTE = "skipped: missing data"
NO_FIELD = "-"

DEFAULT_R_RANGE = range(-4, 7)
GAMMA_LEMMA_RANGE = range(-20, 21)
HODGE_R_RANGE = range(-5, 6)

# The derived exterior power sweep is the slowest property check; cap its instance count.
DERIVED_DEFECT_INSTANCES = 10

# Gate for the functional-equation self-test and the embedding determinant.
SELF_TEST_TOLERANCE = 1e-10


@dataclass(frozen=True)
class CheckContext:
    """Run settings shipped to every worker."""

    precision_bits: int
    tolerance: float
    seed: int
    zeta: ZetaConfig
    sweeps: SweepConfig
    truncation_guard: int

    @classmethod
    def from_cli(cls, cfg: CliConfig) -> "CheckContext":
        app = get_config()
        return cls(
            precision_bits=cfg.precision_bits,
            tolerance=cfg.tolerance,
            seed=cfg.seed,
            zeta=cfg.zeta or app.zeta,
            sweeps=cfg.sweeps or app.sweeps,
            truncation_guard=cfg.truncation_guard,
        )

    @property
    def precision(self) -> EvalPrecision:
        return EvalPrecision.from_config(self.precision_bits, self.zeta)

    def rng(self, *labels) -> random.Random:
        """A stream seeded by the run seed and the labels, independent of scheduling."""
        return random.Random(":".join(str(x) for x in (self.seed, *labels)))


@dataclass(frozen=True)
class CheckTask:
    check: str
    inv: Optional[FieldInvariants]
    ktable: Optional[KGroupTable]
    r: Optional[int]
    context: CheckContext

    @property
    def label(self) -> str:
        return self.inv.label if self.inv is not None else NO_FIELD


def _status(report: ComparisonReport) -> str:
    return "passed" if report.passed else "failed"


def _verified(report: ComparisonReport, sources: Iterable[str] = ()) -> Verification:
    return Verification(report, _status(report), list(sources))


def _tally(outcomes: Sequence[tuple[str, bool]]) -> Verification:
    """One report for a property sweep: passing instances against all instances."""
    failures = [label for label, ok in outcomes if not ok]
    passes = len(outcomes) - len(failures)
    report = compare_integers(passes, len(outcomes))
    report.notes = f"{passes}/{len(outcomes)} instances pass"
    if failures:
        report.with_note("failing: " + ", ".join(failures[:5]))
    return _verified(report)


def _finite(x: Optional[float]) -> Optional[float]:
    return x if x is not None and math.isfinite(x) else None


class Check(abc.ABC):
    """A registered verification.

    per_field checks run once per field; uses_r checks run once per r in the
    requested range that accepts() allows, or only at fixed_r when it is set.
    """

    name: str = ""
    description: str = ""
    per_field: bool = True
    uses_r: bool = True
    fixed_r: Optional[int] = None

    def accepts(self, inv: FieldInvariants, r: int) -> bool:
        return True

    def points(self, inv: Optional[FieldInvariants], r_range: Iterable[int]) -> list[Optional[int]]:
        if not self.uses_r:
            return [None]
        if self.fixed_r is not None:
            return [self.fixed_r]
        return [r for r in r_range if self.accepts(inv, r)]

    def run(self, task: CheckTask) -> ReportItem:
        """Execute one item; exceptions become skipped or error items."""
        try:
            verification = self._execute(task)
        except MissingDataError as exc:
            logger.info("%s %s r=%s skipped: %s", self.name, task.label, task.r, exc)
            return ReportItem(
                check=self.name, field=task.label, r=task.r, status="skipped", notes=f"{SKIPPED_NOTE} ({exc})"
            )
        except Exception as exc:
            logger.warning("%s %s r=%s raised %s: %s", self.name, task.label, task.r, type(exc).__name__, exc)
            return ReportItem(
                check=self.name, field=task.label, r=task.r, status="error", notes=f"{type(exc).__name__}: {exc}"
            )
        report = verification.report
        status = verification.status if report.passed else "failed"
        logger.info("%s %s r=%s: %s", self.name, task.label, task.r, status)
        return ReportItem(
            check=self.name,
            field=task.label,
            r=task.r,
            lhs=report.lhs,
            rhs=report.rhs,
            log2_ratio=_finite(report.log2_ratio),
            k=report.k,
            passed=report.passed,
            status=status,
            sources=list(verification.sources),
            notes=report.notes,
        )

    @abc.abstractmethod
    def _execute(self, task: CheckTask) -> Verification:
        """Run the verification for one item."""


_REGISTRY: dict[str, Check] = {}


def register(cls: type[Check]) -> type[Check]:
    check = cls()
    if check.name in _REGISTRY:
        raise ValueError(f"check '{check.name}' registered twice")
    _REGISTRY[check.name] = check
    return cls


def get_check(name: str) -> Check:
    """Return the registered check called `name`."""
    try:
        return _REGISTRY[name]
    except KeyError:
        raise ValueError(f"Unknown check: '{name}'. Run the `checks` subcommand for the list.") from None


def list_checks() -> list[Check]:
    return list(_REGISTRY.values())


# --- field checks ---


@register
class ClassNumberCheck(Check):
    name = "class-number"
    description = "|zeta*(F, 0)| against hR/w, and h against the analytic class number"
    fixed_r = 0

    def _execute(self, task: CheckTask) -> Verification:
        ctx = task.context
        report = verify_r0(task.inv, ctx.precision, ctx.tolerance)
        consistency = verify_class_number(task.inv, ctx.precision)
        if not consistency.passed:
            report.passed = False
            report.with_note(f"class number: {consistency.notes}")
        return _verified(report, task.inv.sources)


@register
class ResidueCheck(Check):
    name = "residue"
    description = "residue at s = 1 against (hR/w)(2 pi)^r2 / sqrt|d|, k recorded"
    fixed_r = 1

    def _execute(self, task: CheckTask) -> Verification:
        ctx = task.context
        report = verify_r1(task.inv, ctx.precision, ctx.tolerance)
        formula = verify_residue(task.inv, ctx.precision, ctx.tolerance)
        if not formula.passed:
            report.passed = False
            report.with_note(f"analytic class number formula: {formula.notes}")
        return _verified(report, task.inv.sources)


@register
class SpecialValueCheck(Check):
    name = "special-value"
    description = "K-theoretic prediction at r outside {0, 1} against zeta*(F, r)"

    def accepts(self, inv: FieldInvariants, r: int) -> bool:
        return r not in (0, 1)

    def _execute(self, task: CheckTask) -> Verification:
        ctx = task.context
        ktable = task.ktable or KGroupTable.empty(task.label)
        return verify_special_value(task.inv, task.r, ktable, ctx.precision, ctx.tolerance)


@register
class SouleOrderCheck(Check):
    name = "soule-order"
    description = "numeric vanishing order of zeta_F at r against the K-group rank bookkeeping"

    def _execute(self, task: CheckTask) -> Verification:
        report = verify_soule_order(task.inv, task.r, task.ktable, task.context.precision)
        _, source = vanishing_order_with_source(task.inv, task.r, task.ktable)
        return _verified(report, [source] if source else [])


@register
class GammaFactorReductionCheck(Check):
    name = "gamma-factor-reduction"
    description = "exact reduction of the r >= 2 prediction to the 1 - r one, numerically corroborated"

    def accepts(self, inv: FieldInvariants, r: int) -> bool:
        return r >= 2

    def _execute(self, task: CheckTask) -> Verification:
        ctx = task.context
        report = check_gamma_factor_reduction(task.inv, task.r)
        ktable = task.ktable or KGroupTable.empty(task.label)
        try:
            numeric = corroborate_gamma_factor_reduction(task.inv, task.r, ktable, ctx.precision, ctx.tolerance)
        except MissingDataError:
            report.with_note("numeric corroboration skipped: missing data")
        else:
            report.with_note(f"numeric corroboration k = {numeric.k}")
            if not numeric.passed:
                report.passed = False
                report.with_note(f"numeric ratio off by 2^{numeric.log2_ratio:.6g}")
        return _verified(report)


@register
class FunctionalEquationCheck(Check):
    name = "functional-equation"
    description = "max |phi(s) - phi(1 - s)| over seeded sample points"
    uses_r = False

    def _execute(self, task: CheckTask) -> Verification:
        ctx = task.context
        points = functional_equation_points(ctx.rng(self.name, task.label), ctx.sweeps.functional_equation_points)
        return _verified(check_functional_equation(task.inv, points, ctx.precision, SELF_TEST_TOLERANCE))


@register
class EmbeddingDetCheck(Check):
    name = "embedding-det"
    description = "det(sigma_i(b_j))^2 = d_F and det / sqrt|d_F| in {+-1, +-i}"
    uses_r = False

    def _execute(self, task: CheckTask) -> Verification:
        report = check_discriminant_det(task.inv, task.context.precision_bits, SELF_TEST_TOLERANCE)
        return _verified(report, task.inv.sources)


@register
class TComplexCheck(Check):
    name = "t-complex"
    description = "|H^1(t(r))| = |d_F|^(r-1) from derived exterior powers of the conormal complex"

    def accepts(self, inv: FieldInvariants, r: int) -> bool:
        return 1 <= r <= T_COMPLEX_LIMIT

    def _execute(self, task: CheckTask) -> Verification:
        inv = task.inv
        report = check_t_complex_torsion(inv.poly, task.r, inv.discriminant, task.context.truncation_guard)
        return _verified(report)


@register
class DCohomologyCheck(Check):
    name = "d-cohomology"
    description = "H^j_W(Spec O_F, D(r)) table: alternating rank 0 and |H^3| = |d_F|^(r-1) for r > 1"

    def _execute(self, task: CheckTask) -> Verification:
        guard = task.context.truncation_guard
        report = check_D_cohomology(task.inv, task.r, task.ktable, guard)
        table = describe_D_cohomology(task.inv, task.r, task.ktable, guard)
        return _verified(report, table.sources)


@register
class EulerCharacteristicCheck(Check):
    name = "euler-characteristic"
    description = "Euler characteristic of the r = 0 complex against |zeta*(F, 0)|"
    fixed_r = 0

    def _execute(self, task: CheckTask) -> Verification:
        ctx = task.context
        report = check_class_number_euler_characteristic(task.inv, ctx.precision, ctx.tolerance)
        return _verified(report, task.inv.sources)


# --- property sweeps ---


@register
class GammaCheck(Check):
    name = "gamma"
    description = "Gamma ratio lemma on [-20, 20], reflection and duplication at seeded points"
    per_field = False
    uses_r = False

    def _execute(self, task: CheckTask) -> Verification:
        ctx = task.context
        outcomes = [(f"ratio lemma r={r}", check_gamma_ratio_lemma(r).passed) for r in GAMMA_LEMMA_RANGE]
        for z in random_identity_points(ctx.rng(self.name), ctx.sweeps.gamma_points):
            outcomes.append((f"reflection z={z}", check_reflection(z.numerator, z.denominator, ctx.precision_bits)))
            outcomes.append((f"duplication z={z}", check_duplication(z, ctx.precision_bits)))
        return _tally(outcomes)


@register
class HodgeCheck(Check):
    name = "hodge"
    description = "Gamma-factor duality closed forms on seeded Hodge data, r in [-5, 5]"
    per_field = False
    uses_r = False

    def _execute(self, task: CheckTask) -> Verification:
        ctx = task.context
        rng = ctx.rng(self.name)
        outcomes = []
        for index in range(ctx.sweeps.hodge):
            hodge = random_hodge_data(rng)
            check = check_real_place_gamma_duality if hodge.place == REAL else check_complex_place_gamma_duality
            for r in HODGE_R_RANGE:
                outcomes.append((f"#{index} r={r} [{hodge}]", check(hodge, r).passed))
            s = random_identity_points(rng, 1)[0]
            outcomes.append((f"#{index} shift at s={s}", check_gamma_shift_identity(hodge, s, ctx.precision_bits)))
        return _tally(outcomes)


@register
class ExactSequencesCheck(Check):
    name = "exact-sequences"
    description = "determinant choice independence, splicing, torsion-determinant and kernel-cokernel lemmas"
    per_field = False
    uses_r = False

    def _execute(self, task: CheckTask) -> Verification:
        ctx = task.context
        rng = ctx.rng(self.name)
        outcomes = []
        for index in range(ctx.sweeps.exact_sequences):
            seq = random_exact_sequence(rng, rng.randint(2, 5))
            base = determinant_of_exact_sequence(seq)
            again = determinant_of_exact_sequence(seq, random.Random(rng.getrandbits(32)))
            outcomes.append((f"choices #{index}", base == again))
            point = rng.randint(1, seq.length - 1)
            first, second = splice(seq, point)
            spliced = determinant_of_exact_sequence(first) * determinant_of_exact_sequence(second) ** (
                (-1) ** (point - 1)
            )
            outcomes.append((f"splice #{index} at {point}", spliced == base))
        for index in range(ctx.sweeps.lemma_instances):
            torsion = random_torsion_determinant_instance(rng)
            outcomes.append((f"torsion-determinant #{index}", check_torsion_determinant_lemma(torsion)))
            kernel = random_kernel_cokernel_instance(rng)
            outcomes.append((f"kernel-cokernel #{index}", check_kernel_cokernel_lemma(kernel)))
        return _tally(outcomes)


@register
class DoldKanCheck(Check):
    name = "dold-kan"
    description = "N K = id, derived exterior power sanity, rank-level additivity of exterior powers"
    per_field = False
    uses_r = False

    def _execute(self, task: CheckTask) -> Verification:
        ctx = task.context
        guard = ctx.truncation_guard
        rng = ctx.rng(self.name)
        outcomes = []
        for index in range(ctx.sweeps.complexes):
            complex_ = random_chain_complex(rng, max_top=2, max_rank=2)
            outcomes.append((f"N K = id #{index}", not round_trip_defects(complex_, guard)))
        for index in range(min(ctx.sweeps.complexes, DERIVED_DEFECT_INSTANCES)):
            complex_ = random_chain_complex(rng, max_top=1, max_rank=2)
            outcomes.append((f"derived exterior #{index}", not derived_exterior_defects(complex_, max_k=2, guard=guard)))
        for index in range(ctx.sweeps.short_exact_sequences):
            ses = random_short_exact_presentation(rng)
            for n in (1, 2):
                outcomes.append((f"additivity #{index} n={n}", check_exterior_power_additivity(ses, n, guard)))
        return _tally(outcomes)


# --- the batch ---


def build_tasks(
    fields: Sequence[FieldInvariants],
    r_range: Iterable[int],
    ktables: dict[str, KGroupTable],
    context: CheckContext,
    names: Optional[Sequence[str]] = None,
) -> list[CheckTask]:
    """Items in registry order, then field order, then increasing r."""
    r_values = list(r_range)
    checks = [get_check(name) for name in names] if names else list_checks()
    tasks = []
    for check in checks:
        if not check.per_field:
            tasks.append(CheckTask(check.name, None, None, None, context))
            continue
        for inv in fields:
            ktable = ktables.get(inv.label)
            for r in check.points(inv, r_values):
                tasks.append(CheckTask(check.name, inv, ktable, r, context))
    return tasks


def _run_task(task: CheckTask) -> ReportItem:
    return get_check(task.check).run(task)


def _execute(tasks: Sequence[CheckTask], jobs: int) -> list[ReportItem]:
    """Run every task; output order is task order."""
    if jobs <= 1 or len(tasks) <= 1:
        return [_run_task(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_task, tasks))


def totals(items: Iterable[ReportItem]) -> dict[str, int]:
    counts = Counter(item.status for item in items)
    return {status: counts.get(status, 0) for status in STATUSES}


def full_report(
    fields: Sequence[FieldInvariants],
    r_range: Iterable[int],
    ktables: dict[str, KGroupTable],
    cfg: CliConfig,
    names: Optional[Sequence[str]] = None,
) -> ReportDocument:
    """Run the selected checks (all of them by default) and assemble the report."""
    context = CheckContext.from_cli(cfg)
    tasks = build_tasks(fields, r_range, ktables, context, names)
    logger.info("running %d report items on %d worker(s)", len(tasks), cfg.parallelism)
    items = _execute(tasks, cfg.parallelism)
    return ReportDocument(
        precision_bits=cfg.precision_bits,
        tolerance=cfg.tolerance,
        seed=cfg.seed,
        items=items,
        totals=totals(items),
    )


def report_passed(document: ReportDocument) -> bool:
    """True unless some item failed or errored; skipped and informational items do not count."""
    return not any(item.status in ("failed", "error") for item in document.items)
