"""Harmony search scheduler."""

import logging
from dataclasses import dataclass

import numpy as np

from ..core.errors import InvalidParameterError
from ..core.model import SLOTS_PER_DAY, ApplianceKind, HouseholdScenario, TariffDay
from .encoding import Candidate, OptimizerResult, ScheduleProblem, swap_one_slot
from .rng import check_seed, make_rng

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HSAParams:
    """
    Harmony search settings.

    Attributes:
        harmony_memory_size: Harmonies kept in memory.
        hmcr: Harmony memory considering rate.
        par: Pitch adjusting rate.
        max_improvisations: New harmonies to improvise.
        seed: 64-bit unsigned seed.
    """
    harmony_memory_size: int = 30
    hmcr: float = 0.9
    par: float = 0.3
    max_improvisations: int = 5000
    seed: int = 0

    def __post_init__(self):
        for name in ("harmony_memory_size", "max_improvisations"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise InvalidParameterError(f"HSA {name} must be a positive integer, got {value!r}")
        for name in ("hmcr", "par"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not 0 <= value <= 1:
                raise InvalidParameterError(f"HSA {name} must be a probability in [0, 1], got {value!r}")
        check_seed(self.seed)


def _pitch_adjust(appliance, value, rng: np.random.Generator):
    """Move a start one slot earlier or later (clamped), or swap one slot of a slot set."""
    if appliance.kind is ApplianceKind.FLEXIBLE_UNINTERRUPTIBLE:
        step = 1 if rng.random() < 0.5 else -1
        latest = SLOTS_PER_DAY - appliance.operating_slots
        return min(max(value + step, 0), latest)
    return swap_one_slot(value, rng)


def _improvise(memory: list[Candidate], problem: ScheduleProblem, params: HSAParams,
               rng: np.random.Generator) -> Candidate:
    harmony = Candidate()
    for appliance in problem.variables:
        if rng.random() < params.hmcr:
            value = memory[int(rng.integers(len(memory)))].value(appliance)
            if rng.random() < params.par:
                value = _pitch_adjust(appliance, value, rng)
        else:
            value = problem.random_value(appliance, rng)
        harmony = harmony.with_value(appliance, value)
    return problem.repair(harmony)


def hsa_optimize(scenario: HouseholdScenario, tariff: TariffDay, params: HSAParams = HSAParams()) -> OptimizerResult:
    """
    Minimize household cost with harmony search.

    Each improvisation draws every decision variable from harmony memory with
    probability hmcr (then pitch-adjusts it with probability par) or uniformly
    from its domain otherwise. The new harmony replaces the worst memory member
    when it is strictly cheaper.

    Args:
        scenario: Household to schedule.
        tariff: Tariff the optimizer sees.
        params: HSA settings including the seed.

    Returns:
        OptimizerResult: Best harmony found, one history entry per improvisation.
    """
    problem = ScheduleProblem(scenario, tariff)
    if not problem.has_variables:
        cost = problem.evaluate(Candidate())
        return problem.finish(Candidate(), [cost], problem.evaluations, params.seed, "HSA")

    rng = make_rng(params.seed)
    memory = [problem.random_candidate(rng) for _ in range(params.harmony_memory_size)]
    costs = [problem.evaluate(h) for h in memory]
    best_cost, best_index = min((c, i) for i, c in enumerate(costs))
    best = memory[best_index]
    history = []

    for _ in range(params.max_improvisations):
        harmony = _improvise(memory, problem, params, rng)
        cost = problem.evaluate(harmony)
        # worst member; the lowest index wins ties
        worst = max(range(len(costs)), key=lambda i: (costs[i], -i))
        if cost < costs[worst]:
            memory[worst], costs[worst] = harmony, cost
            if cost < best_cost:
                best_cost, best = cost, harmony
        history.append(best_cost)

    logger.debug("HSA seed=%d evaluations=%d best=%d", params.seed, problem.evaluations, best_cost)
    return problem.finish(best, history, problem.evaluations, params.seed, "HSA")
