"""
Batch command-line front end.

Subcommands:

- ``optimize``: baseline and optimizer schedules per tariff and seed, hourly cost CSVs.
- ``attack``: clean-versus-attacked experiments, hourly cost and RI CSVs.
- ``oracle``: exhaustive-search optimum for small households.
- ``validate``: parse and check the scenario, tariff and experiment files only.

Exit codes: 0 success, 2 configuration or parse error, 3 infeasible scenario,
4 internal invariant breach, 5 search space too large for the oracle.
"""

import argparse
import dataclasses
import logging
import sys
from pathlib import Path

from .attacks import parse_attack
from .config import ExperimentConfig, load_experiment_config
from .core.errors import (
    ConfigError,
    HemsError,
    InfeasibleSchedule,
    InvalidAttack,
    InvalidInputError,
    SearchSpaceTooLarge,
)
from .core.formatting import format_percent, format_tenths
from .core.model import cost_reduction, validate_schedule
from .core.scenario import load_scenario, load_tariff
from .reports import (
    attack_entry,
    load_columns,
    optimize_entry,
    sweep_entry,
    write_cost_csv,
    write_load_csv,
    write_ri_csv,
    write_summary,
)
from .resilience import BillingMode, sweep_seeds, with_seed
from .schedulers.dispatch import OptimizerKind, run_optimizer
from .schedulers.oracle import brute_force_optimize, search_space_size

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_INTERNAL = 4
EXIT_SEARCH_SPACE = 5


# ============================================================================
# SETUP
# ============================================================================

def setup_logging(verbose: bool = False) -> None:
    """
    Configure logging to standard error.

    Args:
        verbose: Enable debug-level logging if True.
    """
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S',
        stream=sys.stderr,
    )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=Path, default=None, help='Experiment JSON file')
    common.add_argument('--scenario', type=Path, default=None, help='Scenario JSON file (overrides the config)')
    common.add_argument('--tariff', type=Path, action='append', default=None,
                        help='Tariff JSON file; repeat for several (overrides the config)')
    common.add_argument('--optimizer', action='append', default=None,
                        help='ga, hsa, oracle or baseline; repeat for several (overrides the config)')
    common.add_argument('--attack', action='append', default=None,
                        help="Attack such as 'scale:1.5', 'delay:3', 'lower:10.1@7-10,18-19', 'shift:7-10>0-3'; "
                             "repeat to compose (overrides the config)")
    common.add_argument('--seed', type=int, action='append', default=None,
                        help='Seed; repeat for a sweep (overrides the config)')
    common.add_argument('--out-dir', type=Path, default=None, help='Output directory for artifacts')
    common.add_argument('--billing-mode', choices=[m.value for m in BillingMode], default=None,
                        help='Tariff attacked schedules are billed on')
    common.add_argument('--oracle-limit', type=int, default=None, help='Maximum candidates the oracle may enumerate')
    common.add_argument('--n-jobs', type=int, default=None, help='Parallel workers for seed sweeps')
    common.add_argument('--verbose', '-v', action='store_true', help='Enable verbose logging')

    parser = argparse.ArgumentParser(
        prog="hems-resilience",
        description="Household appliance scheduling under forged time-of-use prices",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("optimize", parents=[common], help="Schedule the household on each tariff")
    commands.add_parser("attack", parents=[common], help="Compare clean and attacked schedules")
    commands.add_parser("oracle", parents=[common], help="Exhaustive-search optimum of a small household")
    commands.add_parser("validate", parents=[common], help="Check scenario, tariff and experiment files")
    return parser


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    """
    Experiment file (or defaults) with command-line overrides applied.

    Raises:
        ConfigError: If the resulting configuration is invalid.
        InvalidAttack: If an --attack value cannot be parsed.
    """
    config = load_experiment_config(args.config) if args.config else ExperimentConfig()

    overrides = {}
    if args.scenario is not None:
        overrides["scenario"] = args.scenario
    if args.tariff is not None:
        overrides["tariffs"] = tuple(args.tariff)
    if args.optimizer is not None:
        overrides["optimizers"] = tuple(args.optimizer)
    if args.attack is not None:
        attacks = []
        for index, text in enumerate(args.attack):
            try:
                attacks.append(parse_attack(text))
            except InvalidAttack as e:
                raise InvalidAttack(e.reason, index)
        overrides["attacks"] = tuple(attacks)
    if args.seed is not None:
        overrides["seeds"] = tuple(args.seed)
    if args.out_dir is not None:
        overrides["output_dir"] = args.out_dir
    if args.billing_mode is not None:
        overrides["billing_mode"] = args.billing_mode
    if args.oracle_limit is not None:
        overrides["oracle_limit"] = args.oracle_limit
    if args.n_jobs is not None:
        overrides["n_jobs"] = args.n_jobs
    return dataclasses.replace(config, **overrides) if overrides else config


def _base_params(config: ExperimentConfig, kind: OptimizerKind):
    return {OptimizerKind.GA: config.ga, OptimizerKind.HSA: config.hsa}.get(kind)


def _check_result(result, scenario) -> None:
    violations = validate_schedule(result.schedule, scenario)
    assert not violations, f"{result.optimizer} returned an infeasible schedule: {violations}"
    assert result.cost.total == sum(result.cost.hourly), f"{result.optimizer} cost total is not the hourly sum"


# ============================================================================
# SUBCOMMANDS
# ============================================================================

def cmd_optimize(config: ExperimentConfig) -> int:
    """
    Schedule the household with every configured optimizer, per tariff and seed.

    Writes ``cost_<tariff>_seed<seed>.csv`` (hour, baseline_cost, then one
    column per optimizer), ``load_<tariff>_seed<seed>.csv`` and
    ``optimize_summary.json``; prints one totals line per run.
    """
    scenario = load_scenario(config.scenario)
    tariffs = [(path.stem, load_tariff(path)) for path in config.tariffs]
    out_dir = config.output_dir
    summary = {"scenario": scenario.name, "runs": []}

    for stem, tariff in tariffs:
        baseline = run_optimizer(OptimizerKind.BASELINE, scenario, tariff)
        for seed in config.seeds:
            results = {"baseline_cost": baseline}
            for kind in config.optimizers:
                if kind is OptimizerKind.BASELINE:
                    continue
                params = with_seed(kind, _base_params(config, kind), seed)
                result = run_optimizer(kind, scenario, tariff, params, config.oracle_limit)
                _check_result(result, scenario)
                results[f"{kind.value}_cost"] = result

            write_cost_csv(out_dir / f"cost_{stem}_seed{seed}.csv", {k: r.cost for k, r in results.items()})
            loads = load_columns(results, scenario)
            write_load_csv(
                out_dir / f"load_{stem}_seed{seed}.csv",
                {k.replace("_cost", "_load_kwh"): v for k, v in loads.items()},
            )

            parts = [f"baseline={format_tenths(baseline.cost.total_tenths)}"]
            for name, result in results.items():
                entry = optimize_entry(result, scenario, tariff, baseline.cost)
                entry["tariff"] = stem
                entry["season"] = tariff.season.value
                summary["runs"].append(entry)
                if result is not baseline:
                    reduction = cost_reduction(baseline.cost.total, result.cost.total)
                    saving = "reduction undefined" if reduction is None else f"{format_percent(reduction)}% below baseline"
                    parts.append(f"{name.removesuffix('_cost')}={format_tenths(result.cost.total_tenths)} ({saving})")
            print(f"{stem} seed={seed} " + " ".join(parts))

    write_summary(out_dir / "optimize_summary.json", summary)
    logger.info("Optimize artifacts written to %s", out_dir)
    return EXIT_OK


def cmd_attack(config: ExperimentConfig) -> int:
    """
    Run clean-versus-attacked experiments for every optimizer, tariff and seed.

    Writes ``attack_cost_<tariff>_seed<seed>.csv`` (clean and attacked
    hourly costs per optimizer), ``ri_<tariff>_seed<seed>.csv`` (hourly RI
    per optimizer, "undefined" where the clean cost is zero) and
    ``attack_summary.json`` with C_O, C_A and the RIs.

    Raises:
        ConfigError: If no attack is configured.
    """
    if not config.attacks:
        raise ConfigError("cmd_attack requires attacks; use cmd_optimize")

    scenario = load_scenario(config.scenario)
    tariffs = [(path.stem, load_tariff(path)) for path in config.tariffs]
    out_dir = config.output_dir
    summary = {"scenario": scenario.name, "tariffs": {}}

    for stem, tariff in tariffs:
        sweeps = {}
        for kind in config.optimizers:
            sweeps[kind] = sweep_seeds(
                scenario, tariff, config.attacks, config.seeds, kind, _base_params(config, kind),
                config.billing_mode, config.oracle_limit, config.band_thresholds, config.n_jobs,
            )

        experiments = []
        for position, seed in enumerate(config.seeds):
            costs, ris = {}, {}
            for kind, sweep in sweeps.items():
                report = sweep.reports[position]
                _check_result(report.clean, scenario)
                _check_result(report.attacked, scenario)
                assert report.ri_total <= 100, f"RI above 100 for {report.optimizer}"
                costs[f"{kind.value}_clean_cost"] = report.clean.cost
                costs[f"{kind.value}_attacked_cost"] = report.attacked.cost
                ris[f"{kind.value}_ri"] = report.ri_hourly
                experiments.append(attack_entry(report))
                print(
                    f"{stem} {report.optimizer} seed={seed} "
                    f"C_O={format_tenths(report.clean.cost.total_tenths)} "
                    f"C_A={format_tenths(report.attacked.cost.total_tenths)} "
                    f"RI={format_percent(report.ri_total)}"
                )
            write_cost_csv(out_dir / f"attack_cost_{stem}_seed{seed}.csv", costs)
            write_ri_csv(out_dir / f"ri_{stem}_seed{seed}.csv", ris)

        summary["tariffs"][stem] = {
            "experiments": experiments,
            "sweeps": {kind.value: sweep_entry(sweep.summary) for kind, sweep in sweeps.items()},
        }

    write_summary(out_dir / "attack_summary.json", summary)
    logger.info("Attack artifacts written to %s", out_dir)
    return EXIT_OK


def cmd_oracle(config: ExperimentConfig) -> int:
    """
    Exhaustive-search optimum per tariff.

    Writes ``oracle_cost_<tariff>.csv`` and ``oracle_<tariff>.json`` (schedule,
    total, evaluations, search-space size).

    Raises:
        SearchSpaceTooLarge: If the household exceeds the oracle limit.
    """
    scenario = load_scenario(config.scenario)
    out_dir = config.output_dir
    for path in config.tariffs:
        tariff = load_tariff(path)
        result = brute_force_optimize(scenario, tariff, config.oracle_limit)
        _check_result(result, scenario)
        write_cost_csv(out_dir / f"oracle_cost_{path.stem}.csv", {"oracle_cost": result.cost})
        write_summary(out_dir / f"oracle_{path.stem}.json", {
            "scenario": scenario.name,
            "tariff": path.stem,
            "total_cents": format_tenths(result.cost.total_tenths),
            "evaluations": result.evaluations,
            "search_space_size": search_space_size(scenario),
            "schedule": {k: list(result.schedule.active_slots(k)) for k in result.schedule.assignment},
        })
        print(f"{path.stem} oracle={format_tenths(result.cost.total_tenths)} evaluations={result.evaluations}")
    return EXIT_OK


def cmd_validate(config: ExperimentConfig) -> int:
    """Parse and invariant-check the scenario and tariff files; print "ok" per file."""
    load_scenario(config.scenario)
    print(f"ok {config.scenario}")
    for path in config.tariffs:
        load_tariff(path)
        print(f"ok {path}")
    return EXIT_OK


COMMANDS = {
    "optimize": cmd_optimize,
    "attack": cmd_attack,
    "oracle": cmd_oracle,
    "validate": cmd_validate,
}


# ============================================================================
# ENTRY POINT
# ============================================================================

def _fail(code: int, error: BaseException) -> int:
    print(f"error: {error}", file=sys.stderr)
    logger.debug("Command failed", exc_info=True)
    return code


def main(argv=None) -> int:
    """
    Run one subcommand.

    Args:
        argv: Arguments without the program name (sys.argv when None).

    Returns:
        int: Process exit code.
    """
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    try:
        config = build_config(args)
        return COMMANDS[args.command](config)
    except SearchSpaceTooLarge as e:
        return _fail(EXIT_SEARCH_SPACE, e)
    except InfeasibleSchedule as e:
        return _fail(EXIT_INFEASIBLE, e)
    except (InvalidInputError, InvalidAttack) as e:
        return _fail(EXIT_CONFIG, e)
    except (HemsError, AssertionError) as e:
        return _fail(EXIT_INTERNAL, e)
    except OSError as e:
        return _fail(EXIT_CONFIG, e)
