"""
Exhaustive-search oracle and the "Without HEMS" baseline.

The oracle enumerates every precedence-feasible candidate, so it is only usable
on small households. It provides ground-truth optima for checking GA and HSA.
"""

import logging
from itertools import combinations, product
from math import prod

from ..core.errors import SearchSpaceTooLarge
from ..core.model import SLOTS_PER_DAY, ApplianceKind, HouseholdScenario, TariffDay, total_cost
from .encoding import Candidate, OptimizerResult, ScheduleProblem, domain_size

logger = logging.getLogger(__name__)

DEFAULT_ORACLE_LIMIT = 10**7


def search_space_size(scenario: HouseholdScenario) -> int:
    """
    Number of raw candidates the oracle would enumerate.

    Uninterruptible appliances contribute 25 - OT starts, interruptible ones
    C(24, OT) slot sets.
    """
    return prod(domain_size(a) for a in scenario.flexible)


def _options(appliance) -> list:
    if appliance.kind is ApplianceKind.FLEXIBLE_UNINTERRUPTIBLE:
        return list(range(SLOTS_PER_DAY - appliance.operating_slots + 1))
    return [frozenset(c) for c in combinations(range(SLOTS_PER_DAY), appliance.operating_slots)]


def _option_cost(appliance, option, prices) -> int:
    if appliance.kind is ApplianceKind.FLEXIBLE_UNINTERRUPTIBLE:
        return appliance.power_wh * sum(prices[option:option + appliance.operating_slots])
    return appliance.power_wh * sum(prices[t] for t in option)


def brute_force_optimize(scenario: HouseholdScenario, tariff: TariffDay,
                         limit: int = DEFAULT_ORACLE_LIMIT) -> OptimizerResult:
    """
    Global minimum-cost schedule by exhaustive enumeration.

    Candidates are enumerated in canonical appliance order, each variable's
    values ascending (slot sets in lexicographic order); only a strictly cheaper
    candidate replaces the incumbent, so ties go to the lexicographically
    smallest candidate. Candidates that break precedence are skipped.

    Args:
        scenario: Household to schedule.
        tariff: Tariff the optimizer sees.
        limit: Maximum raw candidates to enumerate.

    Returns:
        OptimizerResult: The optimum; evaluations counts feasible candidates.

    Raises:
        SearchSpaceTooLarge: If the search space exceeds the limit.
    """
    size = search_space_size(scenario)
    if size > limit:
        raise SearchSpaceTooLarge(size, limit)

    problem = ScheduleProblem(scenario, tariff)
    variables = problem.variables
    prices = list(tariff.prices)
    constant = problem.fixed_cost()

    options = [_options(a) for a in variables]
    option_costs = [[_option_cost(a, o, prices) for o in opts] for a, opts in zip(variables, options)]
    position = {a.id: i for i, a in enumerate(variables)}
    pairs = [
        (position[p], scenario.appliance(p).operating_slots, position[s])
        for p, s in scenario.precedence
    ]

    best_cost = None
    best_choice = None
    evaluations = 0
    for choice in product(*(range(len(opts)) for opts in options)):
        # uninterruptible options are their own start slots
        if any(choice[p] + length > choice[s] for p, length, s in pairs):
            continue
        evaluations += 1
        cost = constant + sum(costs[i] for costs, i in zip(option_costs, choice))
        if best_cost is None or cost < best_cost:
            best_cost, best_choice = cost, choice

    candidate = Candidate()
    for appliance, opts, index in zip(variables, options, best_choice):
        candidate = candidate.with_value(appliance, opts[index])

    logger.debug("Oracle enumerated %d feasible of %d candidates, best=%d", evaluations, size, best_cost)
    return problem.finish(candidate, [best_cost], evaluations, None, "Oracle")


def baseline_optimize(scenario: HouseholdScenario, tariff: TariffDay) -> OptimizerResult:
    """
    The scenario's "Without HEMS" schedule, priced on a tariff.

    Args:
        scenario: Household whose baseline is returned untouched.
        tariff: Tariff used for pricing.

    Returns:
        OptimizerResult: Baseline schedule with a single evaluation.
    """
    cost = total_cost(scenario.baseline, tariff, scenario)
    return OptimizerResult(scenario.baseline, cost, (cost.total,), 1, None, "Baseline")
