"""
CSV and JSON artifacts.

Every artifact is a pure function of its inputs: fixed column order, '.'
decimal separator, ``\\n`` line endings, money in cents with one decimal digit
and percentages with three. Nothing timestamped is written.
"""

import json
import logging
from decimal import Decimal
from pathlib import Path

import pandas as pd

from .core.formatting import format_percent, format_tenths, hour_label
from .core.model import (
    SLOTS_PER_DAY,
    CostBreakdown,
    HouseholdScenario,
    TariffDay,
    cost_reduction,
    energy_by_band,
    load_profile,
    peak_load,
)
from .core.units import units_to_tenths, wh_to_kwh
from .resilience import ExperimentReport, SweepSummary, Stats
from .schedulers.encoding import OptimizerResult

logger = logging.getLogger(__name__)


def _write_frame(frame: pd.DataFrame, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator="\n", encoding="utf-8")
    logger.debug("Wrote %s", path)
    return path


def _hour_columns() -> dict:
    return {"hour": list(range(SLOTS_PER_DAY))}


def format_kwh(wh: int) -> str:
    return f"{wh_to_kwh(wh):.3f}"


# ============================================================================
# CSV WRITERS
# ============================================================================

def write_cost_csv(path, columns: dict[str, CostBreakdown]) -> Path:
    """
    Write hourly costs, one column per run.

    Args:
        path: Output file.
        columns: Column name (e.g. "ga_cost") -> cost breakdown, in column order.

    Returns:
        Path: The written file. Columns are hour, then ``columns``;
        values are cents with one decimal digit.
    """
    data = _hour_columns()
    for name, cost in columns.items():
        data[name] = [format_tenths(t) for t in cost.hourly_tenths]
    return _write_frame(pd.DataFrame(data), path)


def write_ri_csv(path, columns: dict[str, tuple]) -> Path:
    """
    Write hourly resilience indices, one column per optimizer.

    Args:
        path: Output file.
        columns: Column name -> 24 exact RIs (None where undefined).

    Returns:
        Path: The written file; undefined slots read "undefined".
    """
    data = _hour_columns()
    for name, values in columns.items():
        data[name] = [format_percent(v) for v in values]
    return _write_frame(pd.DataFrame(data), path)


def write_load_csv(path, columns: dict[str, tuple[int, ...]]) -> Path:
    """Write hourly household load in kWh, one column per schedule."""
    data = _hour_columns()
    for name, load in columns.items():
        data[name] = [format_kwh(wh) for wh in load]
    return _write_frame(pd.DataFrame(data), path)


def write_summary(path, summary: dict) -> Path:
    """
    Write a JSON summary with sorted keys.

    Args:
        path: Output file.
        summary: JSON-ready document.

    Returns:
        Path: The written file.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.debug("Wrote %s", path)
    return path


def read_cost_csv(path) -> dict[str, tuple[int, ...]]:
    """
    Re-parse a cost CSV.

    Args:
        path: File written by write_cost_csv.

    Returns:
        dict[str, tuple[int, ...]]: Column name -> 24 hourly costs in tenths of a cent.
    """
    frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    columns = [c for c in frame.columns if c != "hour"]
    return {c: tuple(int(Decimal(v) * 10) for v in frame[c]) for c in columns}


# ============================================================================
# SUMMARY RECORDS
# ============================================================================

def stats_to_dict(stats: Stats | None, money: bool = False) -> dict | None:
    if stats is None:
        return None

    def fmt(value):
        return format_tenths(units_to_tenths(value)) if money else format_percent(value)

    return {"mean": fmt(stats.mean), "min": fmt(stats.minimum), "max": fmt(stats.maximum)}


def optimize_entry(result: OptimizerResult, scenario: HouseholdScenario, tariff: TariffDay,
                   baseline: CostBreakdown) -> dict:
    """
    Summary record of one optimizer run.

    Args:
        result: The run.
        scenario: Household the schedule belongs to.
        tariff: Tariff the schedule was priced on.
        baseline: Baseline cost on the same tariff.

    Returns:
        dict: Totals, reduction against the baseline, peak load and energy by band.
    """
    slot, peak_wh = peak_load(result.schedule, scenario)
    return {
        "optimizer": result.optimizer,
        "seed": result.seed,
        "total_cents": format_tenths(result.cost.total_tenths),
        "reduction_vs_baseline_percent": format_percent(cost_reduction(baseline.total, result.cost.total)),
        "evaluations": result.evaluations,
        "peak_load": {"slot": slot, "time": hour_label(slot), "kwh": format_kwh(peak_wh)},
        "energy_by_band_kwh": {
            band.value: format_kwh(wh) for band, wh in energy_by_band(result.schedule, scenario, tariff).items()
        },
        "schedule": {k: list(result.schedule.active_slots(k)) for k in result.schedule.assignment},
    }


def attack_entry(report: ExperimentReport) -> dict:
    """
    Summary record of one clean-versus-attacked experiment.

    Returns:
        dict: C_O, C_A, both RIs, peak loads and the echoed parameters and attacks.
    """
    clean_slot, clean_wh = report.clean_peak
    attacked_slot, attacked_wh = report.attacked_peak
    return {
        "optimizer": report.optimizer,
        "seed": report.seed,
        "params": dict(report.params_echo),
        "attacks": list(report.attack_echo),
        "billing_mode": report.billing_mode.value,
        "clean_total_cents": format_tenths(report.clean.cost.total_tenths),
        "attacked_total_cents": format_tenths(report.attacked.cost.total_tenths),
        "ri_total_percent": format_percent(report.ri_total),
        "ri_mean_hourly_percent": format_percent(report.ri_mean_hourly),
        "clean_peak_load": {"slot": clean_slot, "kwh": format_kwh(clean_wh)},
        "attacked_peak_load": {"slot": attacked_slot, "kwh": format_kwh(attacked_wh)},
        "forged_prices_cents": [str(report.forged_tariff.price_cents(t)) for t in range(SLOTS_PER_DAY)],
    }


def sweep_entry(summary: SweepSummary) -> dict:
    """Summary statistics of a seed sweep."""
    return {
        "runs": summary.runs,
        "ri_total_percent": stats_to_dict(summary.ri_total),
        "ri_mean_hourly_percent": stats_to_dict(summary.ri_mean_hourly),
        "clean_total_cents": stats_to_dict(summary.clean_total, money=True),
        "attacked_total_cents": stats_to_dict(summary.attacked_total, money=True),
    }


def load_columns(results: dict[str, OptimizerResult], scenario: HouseholdScenario) -> dict[str, tuple[int, ...]]:
    """Hourly load per run, keyed by column name."""
    return {name: load_profile(r.schedule, scenario) for name, r in results.items()}
