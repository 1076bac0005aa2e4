"""
Feasible-by-construction candidate encoding shared by every optimizer.

A candidate holds one decision variable per flexible appliance: a start slot
for uninterruptible loads and a slot set for interruptible ones. Fixed loads
never appear; they add a constant to every candidate's cost. Precedence is
restored by ``repair_precedence`` before a candidate is decoded or priced.
"""

from collections.abc import Mapping
from dataclasses import dataclass, field
from math import comb
from types import MappingProxyType

import numpy as np

from ..core.errors import EncodingMismatch
from ..core.model import (
    SLOTS_PER_DAY,
    Appliance,
    ApplianceKind,
    CostBreakdown,
    HouseholdScenario,
    Schedule,
    TariffDay,
    total_cost,
)


# ============================================================================
# TYPES
# ============================================================================

@dataclass(frozen=True)
class Candidate:
    """
    Decision variables of one household schedule.

    Attributes:
        starts: Uninterruptible appliance id -> start slot.
        slot_sets: Interruptible appliance id -> active slots.
        repair_overflow: Precedence pairs whose successor had to be clamped to
            the end of the day during repair (not part of equality).
    """
    starts: Mapping[str, int] = field(default_factory=dict)
    slot_sets: Mapping[str, frozenset[int]] = field(default_factory=dict)
    repair_overflow: tuple[tuple[str, str], ...] = field(default=(), compare=False)

    def __post_init__(self):
        starts = {k: int(self.starts[k]) for k in sorted(self.starts)}
        slot_sets = {k: frozenset(int(s) for s in self.slot_sets[k]) for k in sorted(self.slot_sets)}
        object.__setattr__(self, "starts", MappingProxyType(starts))
        object.__setattr__(self, "slot_sets", MappingProxyType(slot_sets))

    __hash__ = None

    def __reduce__(self):
        return type(self), (dict(self.starts), dict(self.slot_sets), self.repair_overflow)

    def key(self) -> tuple:
        """Canonical sort key: variables by appliance id, slot sets as ascending tuples."""
        values = {k: v for k, v in self.starts.items()}
        values.update({k: tuple(sorted(v)) for k, v in self.slot_sets.items()})
        return tuple((k, values[k]) for k in sorted(values))

    def with_value(self, appliance: Appliance, value) -> "Candidate":
        """Copy of the candidate with one decision variable replaced."""
        if appliance.kind is ApplianceKind.FLEXIBLE_UNINTERRUPTIBLE:
            return Candidate({**self.starts, appliance.id: value}, self.slot_sets)
        return Candidate(self.starts, {**self.slot_sets, appliance.id: value})

    def value(self, appliance: Appliance):
        if appliance.kind is ApplianceKind.FLEXIBLE_UNINTERRUPTIBLE:
            return self.starts[appliance.id]
        return self.slot_sets[appliance.id]


@dataclass(frozen=True)
class OptimizerResult:
    """
    Outcome of one optimizer run.

    Attributes:
        schedule: Best schedule found (always feasible).
        cost: Its cost on the tariff the result was priced on.
        best_cost_history: Best-so-far total after each iteration (non-increasing).
        evaluations: Number of fitness evaluations.
        seed: Seed echoed from the parameters (None for seedless optimizers).
        optimizer: Name of the optimizer.
        candidate: Decision variables of the returned schedule.
    """
    schedule: Schedule
    cost: CostBreakdown
    best_cost_history: tuple[int, ...]
    evaluations: int
    seed: int | None
    optimizer: str
    candidate: Candidate | None = None

    __hash__ = None


# ============================================================================
# CANDIDATE OPERATIONS
# ============================================================================

def check_candidate(candidate: Candidate, scenario: HouseholdScenario) -> None:
    """
    Verify a candidate's variables against a scenario.

    Raises:
        EncodingMismatch: If ids differ from the scenario's flexible appliances,
            a start is out of range, or a slot set has the wrong size.
    """
    expected_starts = {a.id for a in scenario.uninterruptible}
    expected_sets = {a.id for a in scenario.interruptible}
    if set(candidate.starts) != expected_starts:
        raise EncodingMismatch(
            f"Candidate starts {sorted(candidate.starts)} do not match uninterruptible appliances {sorted(expected_starts)}"
        )
    if set(candidate.slot_sets) != expected_sets:
        raise EncodingMismatch(
            f"Candidate slot sets {sorted(candidate.slot_sets)} do not match interruptible appliances {sorted(expected_sets)}"
        )
    for appliance in scenario.uninterruptible:
        start = candidate.starts[appliance.id]
        latest = SLOTS_PER_DAY - appliance.operating_slots
        if not 0 <= start <= latest:
            raise EncodingMismatch(f"Start {start} of '{appliance.id}' is outside [0, {latest}]")
    for appliance in scenario.interruptible:
        slots = candidate.slot_sets[appliance.id]
        if len(slots) != appliance.operating_slots:
            raise EncodingMismatch(
                f"'{appliance.id}' needs {appliance.operating_slots} slots, candidate has {len(slots)}"
            )
        if any(not 0 <= s < SLOTS_PER_DAY for s in slots):
            raise EncodingMismatch(f"Slot set of '{appliance.id}' has slots outside [0, {SLOTS_PER_DAY})")


def repair_precedence(candidate: Candidate, scenario: HouseholdScenario) -> Candidate:
    """
    Move successors after their predecessors.

    Each successor start becomes max(successor start, predecessor start +
    predecessor operating slots). A successor pushed past 24 - its operating
    slots is clamped there and the pair is recorded in ``repair_overflow``;
    its predecessors are then pulled back so the chain ends where the
    successor begins.

    Args:
        candidate: Candidate valid except possibly for precedence.
        scenario: Household providing precedence pairs.

    Returns:
        Candidate: Candidate satisfying every precedence pair.
    """
    if not scenario.precedence:
        return candidate

    starts = dict(candidate.starts)
    overflow = []
    order = scenario.topological_precedence()
    for predecessor, successor in order:
        earliest = starts[predecessor] + scenario.appliance(predecessor).operating_slots
        latest = SLOTS_PER_DAY - scenario.appliance(successor).operating_slots
        starts[successor] = max(starts[successor], earliest)
        if starts[successor] > latest:
            starts[successor] = latest
            overflow.append((predecessor, successor))

    if overflow:
        for predecessor, successor in reversed(order):
            room = starts[successor] - scenario.appliance(predecessor).operating_slots
            starts[predecessor] = min(starts[predecessor], room)

    return Candidate(starts, candidate.slot_sets, tuple(overflow))


def decode(candidate: Candidate, scenario: HouseholdScenario) -> Schedule:
    """
    Turn a candidate into a full household schedule.

    Fixed appliances take their fixed profiles; precedence is repaired first.

    Args:
        candidate: Decision variables for the scenario's flexible appliances.
        scenario: Household to schedule.

    Returns:
        Schedule: A schedule that passes validate_schedule.

    Raises:
        EncodingMismatch: If the candidate does not fit the scenario.
    """
    check_candidate(candidate, scenario)
    repaired = repair_precedence(candidate, scenario)

    slots = {a.id: a.fixed_profile for a in scenario.fixed}
    for appliance in scenario.uninterruptible:
        start = repaired.starts[appliance.id]
        slots[appliance.id] = range(start, start + appliance.operating_slots)
    for appliance in scenario.interruptible:
        slots[appliance.id] = repaired.slot_sets[appliance.id]
    return Schedule.from_slots(slots)


def fitness(candidate: Candidate, scenario: HouseholdScenario, tariff: TariffDay) -> int:
    """
    Total cost of a candidate's decoded schedule.

    Args:
        candidate: Decision variables.
        scenario: Household.
        tariff: Tariff the optimizer sees.

    Returns:
        int: total_cost(decode(candidate)).total in cost units.

    Raises:
        EncodingMismatch: If the candidate does not fit the scenario.
    """
    return total_cost(decode(candidate, scenario), tariff, scenario).total


def domain_size(appliance: Appliance) -> int:
    """Number of values a flexible appliance's decision variable can take."""
    if appliance.kind is ApplianceKind.FLEXIBLE_UNINTERRUPTIBLE:
        return SLOTS_PER_DAY - appliance.operating_slots + 1
    if appliance.kind is ApplianceKind.FLEXIBLE_INTERRUPTIBLE:
        return comb(SLOTS_PER_DAY, appliance.operating_slots)
    raise EncodingMismatch(f"Fixed appliance '{appliance.id}' has no decision variable")


# ============================================================================
# FAST EVALUATION
# ============================================================================

class ScheduleProblem:
    """
    Precomputed pricing context for one (scenario, tariff) pair.

    Optimizers evaluate thousands of candidates; this avoids rebuilding and
    revalidating full schedules for each one. ``evaluate`` returns exactly what
    ``fitness`` returns for an already repaired candidate.
    """

    def __init__(self, scenario: HouseholdScenario, tariff: TariffDay):
        self.scenario = scenario
        self.tariff = tariff
        self.variables = scenario.flexible
        self._prices = tariff.as_array()

        fixed_load = np.zeros(SLOTS_PER_DAY, dtype=np.int64)
        for appliance in scenario.fixed:
            fixed_load[sorted(appliance.fixed_profile)] += appliance.power_wh
        self._fixed_load = fixed_load
        self.evaluations = 0

    @property
    def has_variables(self) -> bool:
        return bool(self.variables)

    def fixed_cost(self) -> int:
        """Cost units of the fixed appliances alone."""
        return int(self._fixed_load @ self._prices)

    def load(self, candidate: Candidate) -> np.ndarray:
        """Hourly load (Wh) of a repaired candidate, fixed appliances included."""
        load = self._fixed_load.copy()
        for appliance in self.variables:
            if appliance.kind is ApplianceKind.FLEXIBLE_UNINTERRUPTIBLE:
                start = candidate.starts[appliance.id]
                load[start:start + appliance.operating_slots] += appliance.power_wh
            else:
                load[sorted(candidate.slot_sets[appliance.id])] += appliance.power_wh
        return load

    def evaluate(self, candidate: Candidate) -> int:
        """Exact total cost (cost units) of a repaired candidate."""
        self.evaluations += 1
        return int(self.load(candidate) @ self._prices)

    def repair(self, candidate: Candidate) -> Candidate:
        return repair_precedence(candidate, self.scenario)

    def random_value(self, appliance: Appliance, rng: np.random.Generator):
        """Uniform draw from one variable's domain."""
        if appliance.kind is ApplianceKind.FLEXIBLE_UNINTERRUPTIBLE:
            return int(rng.integers(0, SLOTS_PER_DAY - appliance.operating_slots + 1))
        chosen = rng.choice(SLOTS_PER_DAY, size=appliance.operating_slots, replace=False)
        return frozenset(int(s) for s in chosen)

    def random_candidate(self, rng: np.random.Generator) -> Candidate:
        """Uniformly drawn, precedence-repaired candidate."""
        candidate = Candidate()
        for appliance in self.variables:
            candidate = candidate.with_value(appliance, self.random_value(appliance, rng))
        return self.repair(candidate)

    def finish(self, candidate: Candidate, history, evaluations: int, seed, optimizer: str) -> OptimizerResult:
        """Decode the winning candidate and price it through total_cost."""
        schedule = decode(candidate, self.scenario)
        cost = total_cost(schedule, self.tariff, self.scenario)
        return OptimizerResult(schedule, cost, tuple(int(h) for h in history), evaluations, seed, optimizer, candidate)


def swap_one_slot(slots: frozenset[int], rng: np.random.Generator) -> frozenset[int]:
    """
    Exchange one active slot for one inactive slot.

    Args:
        slots: Current active slots.
        rng: Random generator.

    Returns:
        frozenset[int]: Slot set of the same size (unchanged if all 24 slots are active).
    """
    active = sorted(slots)
    inactive = [t for t in range(SLOTS_PER_DAY) if t not in slots]
    if not active or not inactive:
        return slots
    leaving = active[int(rng.integers(len(active)))]
    joining = inactive[int(rng.integers(len(inactive)))]
    return (slots - {leaving}) | {joining}
