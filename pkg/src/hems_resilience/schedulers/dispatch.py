"""Optimizer selection shared by the harness, the CLI and the tool server."""

from enum import Enum

from ..core.errors import InvalidParameterError
from ..core.model import HouseholdScenario, TariffDay
from .encoding import OptimizerResult
from .ga import GAParams, ga_optimize
from .hsa import HSAParams, hsa_optimize
from .oracle import DEFAULT_ORACLE_LIMIT, baseline_optimize, brute_force_optimize


class OptimizerKind(str, Enum):
    """Optimizers a report can be produced with."""
    GA = "ga"
    HSA = "hsa"
    ORACLE = "oracle"
    BASELINE = "baseline"

    @property
    def label(self) -> str:
        return {"ga": "GA", "hsa": "HSA", "oracle": "Oracle", "baseline": "Baseline"}[self.value]


def parse_optimizer(name) -> OptimizerKind:
    """
    Resolve an optimizer name, case-insensitively.

    Raises:
        InvalidParameterError: If the name is not a known optimizer.
    """
    if isinstance(name, OptimizerKind):
        return name
    try:
        return OptimizerKind(str(name).lower())
    except ValueError:
        raise InvalidParameterError(
            f"Unknown optimizer '{name}'. Must be one of: {[k.value for k in OptimizerKind]}"
        )


def default_params(kind: OptimizerKind, seed: int = 0):
    """Default parameter record for an optimizer (None for seedless ones)."""
    if kind is OptimizerKind.GA:
        return GAParams(seed=seed)
    if kind is OptimizerKind.HSA:
        return HSAParams(seed=seed)
    return None


def run_optimizer(kind, scenario: HouseholdScenario, tariff: TariffDay, params=None,
                  oracle_limit: int = DEFAULT_ORACLE_LIMIT) -> OptimizerResult:
    """
    Run one optimizer on a household and tariff.

    Args:
        kind: OptimizerKind or its name.
        scenario: Household to schedule.
        tariff: Tariff the optimizer sees.
        params: GAParams or HSAParams; defaults are used when None.
        oracle_limit: Evaluation limit for the oracle.

    Returns:
        OptimizerResult: The optimizer's result priced on ``tariff``.

    Raises:
        InvalidParameterError: If params do not belong to the selected optimizer.
    """
    kind = parse_optimizer(kind)
    if params is None:
        params = default_params(kind)

    if kind is OptimizerKind.GA:
        if not isinstance(params, GAParams):
            raise InvalidParameterError(f"GA needs GAParams, got {type(params).__name__}")
        return ga_optimize(scenario, tariff, params)
    if kind is OptimizerKind.HSA:
        if not isinstance(params, HSAParams):
            raise InvalidParameterError(f"HSA needs HSAParams, got {type(params).__name__}")
        return hsa_optimize(scenario, tariff, params)
    if kind is OptimizerKind.ORACLE:
        return brute_force_optimize(scenario, tariff, oracle_limit)
    return baseline_optimize(scenario, tariff)
