"""
Clean-versus-attacked experiments and the resilience index.

The resilience index (RI) of an attacked cost C_A against a clean cost C_O is
``100 - 100 * |C_A - C_O| / C_O``: 100 means the attack had no effect on the
bill, 0 means the bill doubled (or vanished), and it turns negative past that.
"""

import dataclasses
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from joblib import Parallel, delayed

from .attacks import BandThresholds, compose_attacks, format_attack
from .core.errors import InvalidInputError, InvalidParameterError, UndefinedRI
from .core.model import CostBreakdown, HouseholdScenario, TariffDay, peak_load, total_cost
from .schedulers.dispatch import OptimizerKind, default_params, parse_optimizer, run_optimizer
from .schedulers.encoding import OptimizerResult
from .schedulers.oracle import DEFAULT_ORACLE_LIMIT

logger = logging.getLogger(__name__)


class BillingMode(str, Enum):
    """Tariff the attacked schedule is billed on."""
    TRUE_TARIFF = "true_tariff"
    FORGED_TARIFF = "forged_tariff"


def parse_billing_mode(name) -> BillingMode:
    """
    Resolve a billing mode name.

    Raises:
        InvalidParameterError: If the name is unknown.
    """
    try:
        return BillingMode(name)
    except ValueError:
        raise InvalidParameterError(
            f"Unknown billing mode '{name}'. Must be one of: {[m.value for m in BillingMode]}"
        )


# ============================================================================
# RESILIENCE INDEX
# ============================================================================

def resilience_index(c_attacked, c_clean) -> Fraction:
    """
    Resilience index of an attacked cost against a clean cost.

    Args:
        c_attacked: Attacked cost (non-negative, any exact number type).
        c_clean: Clean cost (positive).

    Returns:
        Fraction: 100 - 100 * |c_attacked - c_clean| / c_clean, exactly.

    Raises:
        UndefinedRI: If c_clean is zero.
        InvalidInputError: If either cost is negative.
    """
    attacked, clean = Fraction(c_attacked), Fraction(c_clean)
    if clean == 0:
        raise UndefinedRI("Resilience index is undefined for a zero clean cost")
    if clean < 0 or attacked < 0:
        raise InvalidInputError(f"Costs must be non-negative, got C_A={attacked} and C_O={clean}")
    return 100 - 100 * abs(attacked - clean) / clean


def hourly_resilience(attacked: CostBreakdown, clean: CostBreakdown) -> tuple[Fraction | None, ...]:
    """Slot-wise RI; None where the clean hourly cost is zero."""
    return tuple(
        None if c == 0 else resilience_index(a, c)
        for a, c in zip(attacked.hourly, clean.hourly)
    )


def mean_defined(values) -> Fraction | None:
    """Mean of the non-None values, None if there are none."""
    defined = [v for v in values if v is not None]
    if not defined:
        return None
    return sum(defined, Fraction(0)) / len(defined)


# ============================================================================
# EXPERIMENTS
# ============================================================================

@dataclass(frozen=True)
class ExperimentReport:
    """
    One clean run and one attacked run of the same optimizer and seed.

    Attributes:
        optimizer: Optimizer label (GA, HSA, Oracle, Baseline).
        params_echo: Parameters used for both runs, seed included.
        clean: Optimized and billed on the true tariff (cost C_O).
        attacked: Optimized on the forged tariff, billed per ``billing_mode`` (cost C_A).
            Its best_cost_history is what the optimizer saw, on the forged tariff.
        ri_total: RI of the daily totals.
        ri_hourly: RI per slot; None where the clean hourly cost is zero.
        ri_mean_hourly: Mean of the defined hourly RIs.
        attack_echo: Attacks applied, in compact text form.
        billing_mode: Tariff the attacked schedule was billed on.
        forged_tariff: Tariff the attacked run optimized on.
        clean_peak: (slot, Wh) peak load of the clean schedule.
        attacked_peak: (slot, Wh) peak load of the attacked schedule.
    """
    optimizer: str
    params_echo: dict
    clean: OptimizerResult
    attacked: OptimizerResult
    ri_total: Fraction
    ri_hourly: tuple[Fraction | None, ...]
    ri_mean_hourly: Fraction | None
    attack_echo: tuple[str, ...]
    billing_mode: BillingMode
    forged_tariff: TariffDay
    clean_peak: tuple[int, int]
    attacked_peak: tuple[int, int]

    __hash__ = None

    @property
    def seed(self) -> int | None:
        return self.params_echo.get("seed")


def _params_echo(kind: OptimizerKind, params, oracle_limit: int, billing_mode: BillingMode) -> dict:
    echo = {"optimizer": kind.label, "billing_mode": billing_mode.value}
    if params is not None:
        echo.update(dataclasses.asdict(params))
    if kind is OptimizerKind.ORACLE:
        echo["oracle_limit"] = oracle_limit
    return echo


def run_experiment(scenario: HouseholdScenario, true_tariff: TariffDay, attacks, optimizer="ga", params=None,
                   billing_mode=BillingMode.TRUE_TARIFF, oracle_limit: int = DEFAULT_ORACLE_LIMIT,
                   band_thresholds: BandThresholds | None = None) -> ExperimentReport:
    """
    Measure how much a price forgery changes an optimizer's bill.

    The clean run optimizes and bills on the true tariff. The attacked run
    uses the same optimizer and seed on the forged tariff and is billed on the
    true tariff (or the forged one in ``forged_tariff`` mode).

    Args:
        scenario: Household to schedule.
        true_tariff: Tariff the household is actually billed on.
        attacks: Ordered attack specs; empty means no attack.
        optimizer: OptimizerKind or its name.
        params: GAParams or HSAParams; defaults when None.
        billing_mode: BillingMode or its value.
        oracle_limit: Evaluation limit for the oracle.
        band_thresholds: Optional band relabelling of the forged tariff.

    Returns:
        ExperimentReport: Both runs and their resilience indices.

    Raises:
        InvalidAttack: If an attack cannot be applied.
        UndefinedRI: If the clean daily cost is zero.
    """
    kind = parse_optimizer(optimizer)
    billing_mode = parse_billing_mode(billing_mode)
    attacks = list(attacks)
    if params is None:
        params = default_params(kind)

    clean = run_optimizer(kind, scenario, true_tariff, params, oracle_limit)
    forged = compose_attacks(true_tariff, attacks, band_thresholds)
    attacked = run_optimizer(kind, scenario, forged, params, oracle_limit)
    if billing_mode is BillingMode.TRUE_TARIFF:
        # history stays in forged-tariff costs
        attacked = dataclasses.replace(attacked, cost=total_cost(attacked.schedule, true_tariff, scenario))

    ri_hourly = hourly_resilience(attacked.cost, clean.cost)
    report = ExperimentReport(
        optimizer=kind.label,
        params_echo=_params_echo(kind, params, oracle_limit, billing_mode),
        clean=clean,
        attacked=attacked,
        ri_total=resilience_index(attacked.cost.total, clean.cost.total),
        ri_hourly=ri_hourly,
        ri_mean_hourly=mean_defined(ri_hourly),
        attack_echo=tuple(format_attack(a) for a in attacks),
        billing_mode=billing_mode,
        forged_tariff=forged,
        clean_peak=peak_load(clean.schedule, scenario),
        attacked_peak=peak_load(attacked.schedule, scenario),
    )
    logger.info(
        "%s seed=%s attacks=%s C_O=%d C_A=%d RI=%.3f",
        report.optimizer, report.seed, list(report.attack_echo),
        clean.cost.total, attacked.cost.total, float(report.ri_total),
    )
    return report


# ============================================================================
# SEED SWEEPS
# ============================================================================

@dataclass(frozen=True)
class Stats:
    """Mean, minimum and maximum of a set of exact values."""
    mean: Fraction
    minimum: Fraction
    maximum: Fraction

    @classmethod
    def of(cls, values) -> "Stats | None":
        values = [Fraction(v) for v in values if v is not None]
        if not values:
            return None
        return cls(sum(values, Fraction(0)) / len(values), min(values), max(values))


@dataclass(frozen=True)
class SweepSummary:
    """Statistics over the reports of a seed sweep (undefined entries skipped)."""
    runs: int
    ri_total: Stats
    ri_mean_hourly: Stats | None
    clean_total: Stats
    attacked_total: Stats


@dataclass(frozen=True)
class SweepResult:
    reports: tuple[ExperimentReport, ...]
    summary: SweepSummary


def summarize(reports) -> SweepSummary:
    """
    Fold experiment reports into summary statistics.

    Raises:
        InvalidParameterError: If there are no reports.
    """
    reports = list(reports)
    if not reports:
        raise InvalidParameterError("Cannot summarize an empty sweep")
    return SweepSummary(
        runs=len(reports),
        ri_total=Stats.of(r.ri_total for r in reports),
        ri_mean_hourly=Stats.of(r.ri_mean_hourly for r in reports),
        clean_total=Stats.of(r.clean.cost.total for r in reports),
        attacked_total=Stats.of(r.attacked.cost.total for r in reports),
    )


def with_seed(kind, params, seed: int):
    """Copy of an optimizer's params with another seed (None for seedless optimizers)."""
    kind = parse_optimizer(kind)
    if kind not in (OptimizerKind.GA, OptimizerKind.HSA):
        return None
    if params is None:
        return default_params(kind, seed)
    return dataclasses.replace(params, seed=seed)


def sweep_seeds(scenario: HouseholdScenario, true_tariff: TariffDay, attacks, seeds, optimizer="ga", params=None,
                billing_mode=BillingMode.TRUE_TARIFF, oracle_limit: int = DEFAULT_ORACLE_LIMIT,
                band_thresholds: BandThresholds | None = None, n_jobs: int = 1) -> SweepResult:
    """
    Run one experiment per seed.

    Args:
        scenario: Household to schedule.
        true_tariff: Billing tariff.
        attacks: Ordered attack specs.
        seeds: Seeds to run (duplicates allowed).
        optimizer: OptimizerKind or its name.
        params: Base GAParams or HSAParams; each run replaces the seed.
        billing_mode: BillingMode or its value.
        oracle_limit: Evaluation limit for the oracle.
        band_thresholds: Optional band relabelling of the forged tariff.
        n_jobs: joblib worker count.

    Returns:
        SweepResult: Reports in seed order and their summary.

    Raises:
        InvalidParameterError: If no seeds are given.
    """
    seeds = list(seeds)
    if not seeds:
        raise InvalidParameterError("A seed sweep needs at least one seed")
    attacks = list(attacks)
    kind = parse_optimizer(optimizer)

    reports = Parallel(n_jobs=n_jobs)(
        delayed(run_experiment)(
            scenario, true_tariff, attacks, kind, with_seed(kind, params, seed),
            billing_mode, oracle_limit, band_thresholds,
        )
        for seed in seeds
    )
    return SweepResult(tuple(reports), summarize(reports))
