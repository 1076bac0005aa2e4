from fractions import Fraction

from fastmcp import FastMCP

from .attacks import parse_attack
from .core.errors import HemsError
from .core.formatting import format_percent, format_tenths
from .core.model import Season, cost_reduction
from .core.scenario import default_tariff, load_scenario, load_tariff, make_table1_scenario
from .resilience import BillingMode, resilience_index, run_experiment
from .schedulers.dispatch import OptimizerKind, default_params, run_optimizer
from .schedulers.oracle import DEFAULT_ORACLE_LIMIT, brute_force_optimize, search_space_size

mcp = FastMCP(name="HemsResilienceMCP")

SEASONS = [s.value for s in Season]


def _scenario(scenario_path):
    return load_scenario(scenario_path) if scenario_path else make_table1_scenario()


def _tariff(season: str, tariff_path):
    if tariff_path:
        return load_tariff(tariff_path)
    if season not in SEASONS:
        raise ValueError(f"Season must be one of {SEASONS}")
    return default_tariff(season)


def _schedule(result) -> dict:
    return {k: list(result.schedule.active_slots(k)) for k in result.schedule.assignment}


@mcp.tool
def validate_files(scenario_path: str = None, tariff_paths: list[str] = None) -> dict:
    """
    Parse and invariant-check a scenario file and tariff files.

    Args:
        scenario_path: Scenario JSON file (the shipped household if omitted).
        tariff_paths: Tariff JSON files (the shipped summer and winter tariffs if omitted).

    Returns:
        dict:
            scenario (dict): Name, appliance count and precedence pairs.
            tariffs (list): Name and season of each tariff.
    """
    try:
        scenario = _scenario(scenario_path)
        if tariff_paths:
            tariffs = [load_tariff(p) for p in tariff_paths]
        else:
            tariffs = [default_tariff(s) for s in Season]
        return {
            "scenario": {
                "name": scenario.name,
                "appliances": len(scenario.appliances),
                "precedence": [list(p) for p in scenario.precedence],
            },
            "tariffs": [{"name": t.name, "season": t.season.value} for t in tariffs],
        }
    except HemsError as e:
        return {"error": str(e)}


@mcp.tool
def optimize_schedule(optimizer: str = "ga", season: str = "winter", seed: int = 0,
                      scenario_path: str = None, tariff_path: str = None) -> dict:
    """
    Schedule the household's flexible appliances against a time-of-use tariff.

    Args:
        optimizer: ga, hsa, oracle or baseline.
        season: summer or winter, used when no tariff file is given.
        seed: Seed for GA and HSA.
        scenario_path: Scenario JSON file (the shipped household if omitted).
        tariff_path: Tariff JSON file (the shipped seasonal tariff if omitted).

    Returns:
        dict:
            optimizer (str): Optimizer label.
            total_cents (str): Daily cost in cents, one decimal.
            hourly_cents (list): Hourly costs in cents.
            baseline_total_cents (str): Cost of the "Without HEMS" schedule.
            reduction_vs_baseline_percent (str): Saving against the baseline.
            schedule (dict): Active slots per appliance.
    """
    if optimizer not in [k.value for k in OptimizerKind]:
        raise ValueError(f"Optimizer must be one of {[k.value for k in OptimizerKind]}")
    if seed < 0:
        raise ValueError("Seed must be non-negative")

    try:
        scenario = _scenario(scenario_path)
        tariff = _tariff(season, tariff_path)
        kind = OptimizerKind(optimizer)
        result = run_optimizer(kind, scenario, tariff, default_params(kind, seed))
        baseline = run_optimizer(OptimizerKind.BASELINE, scenario, tariff)
        return {
            "optimizer": result.optimizer,
            "seed": result.seed,
            "total_cents": format_tenths(result.cost.total_tenths),
            "hourly_cents": [format_tenths(t) for t in result.cost.hourly_tenths],
            "baseline_total_cents": format_tenths(baseline.cost.total_tenths),
            "reduction_vs_baseline_percent": format_percent(cost_reduction(baseline.cost.total, result.cost.total)),
            "evaluations": result.evaluations,
            "schedule": _schedule(result),
        }
    except HemsError as e:
        return {"error": str(e)}


@mcp.tool
def simulate_attack(attacks: list[str], optimizer: str = "ga", season: str = "winter", seed: int = 0,
                    billing_mode: str = "true_tariff", scenario_path: str = None, tariff_path: str = None) -> dict:
    """
    Compare the bill of a clean run with a run on a forged tariff.

    Args:
        attacks: Attacks such as "scale:1.5", "delay:3", "lower:10.1@7-10,18-19" or "shift:7-10>0-3", composed in order.
        optimizer: ga, hsa, oracle or baseline.
        season: summer or winter, used when no tariff file is given.
        seed: Seed shared by the clean and attacked runs.
        billing_mode: true_tariff or forged_tariff.
        scenario_path: Scenario JSON file (the shipped household if omitted).
        tariff_path: Tariff JSON file (the shipped seasonal tariff if omitted).

    Returns:
        dict:
            clean_total_cents (str): C_O.
            attacked_total_cents (str): C_A.
            ri_total_percent (str): Resilience index of the daily totals.
            ri_mean_hourly_percent (str): Mean of the defined hourly indices.
            ri_hourly_percent (list): Hourly indices ("undefined" where C_O is zero).
    """
    if optimizer not in [k.value for k in OptimizerKind]:
        raise ValueError(f"Optimizer must be one of {[k.value for k in OptimizerKind]}")
    if billing_mode not in [m.value for m in BillingMode]:
        raise ValueError(f"Billing mode must be one of {[m.value for m in BillingMode]}")

    try:
        scenario = _scenario(scenario_path)
        tariff = _tariff(season, tariff_path)
        kind = OptimizerKind(optimizer)
        specs = [parse_attack(a) for a in attacks]
        report = run_experiment(scenario, tariff, specs, kind, default_params(kind, seed), billing_mode)
        return {
            "optimizer": report.optimizer,
            "attacks": list(report.attack_echo),
            "clean_total_cents": format_tenths(report.clean.cost.total_tenths),
            "attacked_total_cents": format_tenths(report.attacked.cost.total_tenths),
            "ri_total_percent": format_percent(report.ri_total),
            "ri_mean_hourly_percent": format_percent(report.ri_mean_hourly),
            "ri_hourly_percent": [format_percent(v) for v in report.ri_hourly],
            "clean_schedule": _schedule(report.clean),
            "attacked_schedule": _schedule(report.attacked),
        }
    except HemsError as e:
        return {"error": str(e)}


@mcp.tool
def compute_resilience_index(attacked_cost: float, clean_cost: float) -> dict:
    """
    Resilience index 100 - 100 * |C_A - C_O| / C_O.

    Args:
        attacked_cost: Attacked cost C_A (any currency unit).
        clean_cost: Clean cost C_O in the same unit.

    Returns:
        dict:
            ri (float): Resilience index in percent.
            formatted (str): The index with three decimals.
    """
    if clean_cost <= 0:
        raise ValueError("Clean cost must be positive")
    if attacked_cost < 0:
        raise ValueError("Attacked cost must be non-negative")

    ri = resilience_index(Fraction(str(attacked_cost)), Fraction(str(clean_cost)))
    return {
        "ri": round(float(ri), 3),
        "formatted": format_percent(ri),
    }


@mcp.tool
def oracle_optimum(season: str = "winter", scenario_path: str = None, tariff_path: str = None,
                   limit: int = DEFAULT_ORACLE_LIMIT) -> dict:
    """
    Global minimum-cost schedule of a small household by exhaustive search.

    Args:
        season: summer or winter, used when no tariff file is given.
        scenario_path: Scenario JSON file (the shipped household if omitted).
        tariff_path: Tariff JSON file (the shipped seasonal tariff if omitted).
        limit: Maximum candidates to enumerate.

    Returns:
        dict:
            total_cents (str): Optimal daily cost.
            search_space_size (int): Candidates enumerated.
            schedule (dict): Active slots per appliance.
    """
    if limit < 1:
        raise ValueError("Limit must be positive")

    try:
        scenario = _scenario(scenario_path)
        tariff = _tariff(season, tariff_path)
        result = brute_force_optimize(scenario, tariff, limit)
        return {
            "total_cents": format_tenths(result.cost.total_tenths),
            "evaluations": result.evaluations,
            "search_space_size": search_space_size(scenario),
            "schedule": _schedule(result),
        }
    except HemsError as e:
        return {"error": str(e)}


def main():
    """Main entry point for the tool server console script."""
    mcp.run()


if __name__ == "__main__":
    main()
