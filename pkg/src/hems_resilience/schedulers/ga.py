"""Genetic algorithm scheduler."""

import logging
from dataclasses import dataclass

import numpy as np

from ..core.errors import InvalidParameterError
from ..core.model import SLOTS_PER_DAY, HouseholdScenario, TariffDay
from .encoding import Candidate, OptimizerResult, ScheduleProblem, swap_one_slot
from .rng import check_seed, make_rng

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GAParams:
    """
    Genetic algorithm settings.

    Attributes:
        population_size: Individuals per generation.
        generations: Generations to evolve.
        crossover_rate: Probability a child is produced by uniform crossover.
        mutation_rate: Per-variable mutation probability.
        tournament_size: Individuals drawn per tournament.
        seed: 64-bit unsigned seed.
    """
    population_size: int = 32
    generations: int = 200
    crossover_rate: float = 0.9
    mutation_rate: float = 0.05
    tournament_size: int = 3
    seed: int = 0

    def __post_init__(self):
        for name in ("population_size", "generations", "tournament_size"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise InvalidParameterError(f"GA {name} must be a positive integer, got {value!r}")
        if self.tournament_size > self.population_size:
            raise InvalidParameterError(
                f"GA tournament_size ({self.tournament_size}) cannot exceed population_size ({self.population_size})"
            )
        for name in ("crossover_rate", "mutation_rate"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not 0 <= value <= 1:
                raise InvalidParameterError(f"GA {name} must be a probability in [0, 1], got {value!r}")
        check_seed(self.seed)


def _tournament(fitnesses: list[int], size: int, rng: np.random.Generator) -> int:
    """Index of the cheapest of ``size`` uniformly drawn individuals (lowest index on ties)."""
    contenders = rng.integers(0, len(fitnesses), size=size)
    return min((fitnesses[int(i)], int(i)) for i in contenders)[1]


def _crossover(first: Candidate, second: Candidate, problem: ScheduleProblem, rng: np.random.Generator) -> Candidate:
    """Uniform crossover: each variable comes from either parent with equal probability."""
    child = first
    for appliance in problem.variables:
        if rng.random() < 0.5:
            child = child.with_value(appliance, second.value(appliance))
    return child


def move_start(candidate: Candidate, appliance, start: int, scenario: HouseholdScenario) -> Candidate:
    """
    Set one start slot and shift its precedence successors by the same offset.

    Successors (transitively) keep their gap to the moved appliance, clamped to
    the day, so a whole chain can move earlier in a single mutation.

    Args:
        candidate: Candidate to change.
        appliance: Uninterruptible appliance being moved.
        start: Its new start slot.
        scenario: Household providing precedence pairs.

    Returns:
        Candidate: Changed candidate, not yet repaired.
    """
    offset = start - candidate.starts[appliance.id]
    candidate = candidate.with_value(appliance, start)
    moved = {appliance.id}
    for predecessor, successor in scenario.topological_precedence():
        if predecessor in moved and successor not in moved:
            follower = scenario.appliance(successor)
            latest = SLOTS_PER_DAY - follower.operating_slots
            candidate = candidate.with_value(follower, min(max(candidate.starts[successor] + offset, 0), latest))
            moved.add(successor)
    return candidate


def _mutate(candidate: Candidate, problem: ScheduleProblem, rate: float, rng: np.random.Generator) -> Candidate:
    """Resample starts uniformly, successors following; swap one slot in slot sets."""
    for appliance in problem.variables:
        if rng.random() < rate:
            if appliance.id in candidate.starts:
                candidate = move_start(candidate, appliance, problem.random_value(appliance, rng), problem.scenario)
            else:
                candidate = candidate.with_value(appliance, swap_one_slot(candidate.slot_sets[appliance.id], rng))
    return candidate


def ga_optimize(scenario: HouseholdScenario, tariff: TariffDay, params: GAParams = GAParams()) -> OptimizerResult:
    """
    Minimize household cost with a generational genetic algorithm.

    Tournament selection, uniform crossover and per-variable mutation build each
    new generation; the best individual is carried over unchanged (elitism), so
    the best-so-far history never increases. Every child is precedence-repaired
    before evaluation. Selection only compares costs, so the run depends on the
    order of candidate costs and the seed alone.

    Args:
        scenario: Household to schedule.
        tariff: Tariff the optimizer sees.
        params: GA settings including the seed.

    Returns:
        OptimizerResult: Best schedule ever evaluated, one history entry per generation.
    """
    problem = ScheduleProblem(scenario, tariff)
    if not problem.has_variables:
        cost = problem.evaluate(Candidate())
        return problem.finish(Candidate(), [cost], problem.evaluations, params.seed, "GA")

    rng = make_rng(params.seed)
    population = [problem.random_candidate(rng) for _ in range(params.population_size)]
    fitnesses = [problem.evaluate(c) for c in population]
    best_cost, best_index = min((f, i) for i, f in enumerate(fitnesses))
    best = population[best_index]
    history = []

    for _ in range(params.generations):
        offspring = [best]
        offspring_fitness = [best_cost]
        while len(offspring) < params.population_size:
            first = population[_tournament(fitnesses, params.tournament_size, rng)]
            if rng.random() < params.crossover_rate:
                second = population[_tournament(fitnesses, params.tournament_size, rng)]
                child = _crossover(first, second, problem, rng)
            else:
                child = first
            child = problem.repair(_mutate(child, problem, params.mutation_rate, rng))
            offspring.append(child)
            offspring_fitness.append(problem.evaluate(child))

        population, fitnesses = offspring, offspring_fitness
        generation_cost, generation_index = min((f, i) for i, f in enumerate(fitnesses))
        if generation_cost < best_cost:
            best_cost, best = generation_cost, population[generation_index]
        history.append(best_cost)

    logger.debug("GA seed=%d evaluations=%d best=%d", params.seed, problem.evaluations, best_cost)
    return problem.finish(best, history, problem.evaluations, params.seed, "GA")
