"""
Household demand-response model.

Appliances, time-of-use tariffs, 24-slot schedules and household scenarios are
immutable value objects. Energy is held in integer watt-hours and prices in
integer milli-cents per kWh, so every cost below is an exact integer in cost
units (1e-6 cent); see ``core.units``.
"""

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from types import MappingProxyType

import numpy as np

from .errors import InfeasibleSchedule, InvalidInputError
from .units import cents_to_millicents, kwh_to_wh, millicents_to_cents, units_to_tenths, wh_to_kwh

SLOTS_PER_DAY = 24


# ============================================================================
# ENUMERATIONS
# ============================================================================

class ApplianceKind(str, Enum):
    """Flexibility class of a household load."""
    FIXED = "fixed"
    FLEXIBLE_UNINTERRUPTIBLE = "flexible_uninterruptible"
    FLEXIBLE_INTERRUPTIBLE = "flexible_interruptible"


class Band(str, Enum):
    """Time-of-use price band label."""
    OFF_PEAK = "off_peak"
    MID_PEAK = "mid_peak"
    PEAK = "peak"


class Season(str, Enum):
    """Tariff season."""
    SUMMER = "summer"
    WINTER = "winter"


class ViolationRule(str, Enum):
    """Schedule rule broken by a Violation."""
    MISSING = "missing"
    UNKNOWN = "unknown"
    CARDINALITY = "cardinality"
    FIXED_PROFILE = "fixed_profile"
    CONTIGUITY = "contiguity"
    PRECEDENCE = "precedence"


# ============================================================================
# VALUE TYPES
# ============================================================================

def _slot_set(slots: Iterable[int], what: str) -> frozenset[int]:
    result = frozenset(int(s) for s in slots)
    out_of_range = sorted(s for s in result if not 0 <= s < SLOTS_PER_DAY)
    if out_of_range:
        raise InvalidInputError(f"{what} has slots outside [0, {SLOTS_PER_DAY}): {out_of_range}")
    return result


@dataclass(frozen=True)
class Appliance:
    """
    One household load.

    Attributes:
        id: Unique identifier, e.g. "washing machine".
        kind: Flexibility class.
        power_wh: Energy consumed per active hourly slot, in Wh.
        operating_slots: Hourly slots the appliance must run per day.
        fixed_profile: Required active slots; present iff kind is FIXED.
    """
    id: str
    kind: ApplianceKind
    power_wh: int
    operating_slots: int
    fixed_profile: frozenset[int] | None = None

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise InvalidInputError("Appliance id must be a non-empty string")
        object.__setattr__(self, "kind", ApplianceKind(self.kind))
        if isinstance(self.power_wh, bool) or not isinstance(self.power_wh, int) or self.power_wh <= 0:
            raise InvalidInputError(f"Appliance '{self.id}': power rating must be positive")
        if isinstance(self.operating_slots, bool) or not isinstance(self.operating_slots, int):
            raise InvalidInputError(f"Appliance '{self.id}': operating slots must be an integer")
        if not 1 <= self.operating_slots <= SLOTS_PER_DAY:
            raise InvalidInputError(
                f"Appliance '{self.id}': operating slots must be in 1..{SLOTS_PER_DAY}, got {self.operating_slots}"
            )

        if self.kind is ApplianceKind.FIXED:
            if self.fixed_profile is None:
                raise InvalidInputError(f"Appliance '{self.id}': fixed appliances need a fixed profile")
            profile = _slot_set(self.fixed_profile, f"Appliance '{self.id}' fixed profile")
            if len(profile) != self.operating_slots:
                raise InvalidInputError(
                    f"Appliance '{self.id}': fixed profile has {len(profile)} slots, expected {self.operating_slots}"
                )
            object.__setattr__(self, "fixed_profile", profile)
        elif self.fixed_profile is not None:
            raise InvalidInputError(f"Appliance '{self.id}': only fixed appliances may carry a fixed profile")

    @classmethod
    def from_kwh(cls, id: str, kind, power_rating, operating_slots: int, fixed_profile=None) -> "Appliance":
        """
        Build an appliance from a power rating in kWh per slot.

        Args:
            id: Appliance identifier.
            kind: ApplianceKind or its string value.
            power_rating: kWh per active slot (at most three decimals).
            operating_slots: Required active slots per day.
            fixed_profile: Slot indices for fixed appliances.

        Returns:
            Appliance: The validated appliance.

        Raises:
            InvalidInputError: If any appliance invariant is violated.
        """
        try:
            power_wh = kwh_to_wh(power_rating)
        except ValueError as e:
            raise InvalidInputError(f"Appliance '{id}': {e}")
        return cls(id, ApplianceKind(kind), power_wh, operating_slots, fixed_profile)

    @property
    def power_rating(self):
        """Power rating in kWh per slot, as an exact Decimal."""
        return wh_to_kwh(self.power_wh)

    @property
    def is_flexible(self) -> bool:
        return self.kind is not ApplianceKind.FIXED

    @property
    def daily_energy_wh(self) -> int:
        """Energy consumed per day regardless of when it runs."""
        return self.power_wh * self.operating_slots


@dataclass(frozen=True)
class TariffDay:
    """
    Twenty-four hourly time-of-use prices for one day.

    Attributes:
        prices: Milli-cents per kWh for slots 0..23 (slot 0 is 12 am - 1 am).
        bands: Band label for each slot.
        season: Season the tariff applies to.
        name: Free-form label used in reports.
    """
    prices: tuple[int, ...]
    bands: tuple[Band, ...]
    season: Season
    name: str = ""

    def __post_init__(self):
        prices = tuple(self.prices)
        bands = tuple(Band(b) for b in self.bands)
        if len(prices) != SLOTS_PER_DAY:
            raise InvalidInputError(f"Tariff needs {SLOTS_PER_DAY} prices, got {len(prices)}")
        if len(bands) != SLOTS_PER_DAY:
            raise InvalidInputError(f"Tariff needs {SLOTS_PER_DAY} band labels, got {len(bands)}")
        for slot, price in enumerate(prices):
            if isinstance(price, bool) or not isinstance(price, (int, np.integer)):
                raise InvalidInputError(f"Tariff price at slot {slot} must be integer milli-cents")
            if price <= 0:
                raise InvalidInputError(f"Tariff price at slot {slot} must be positive")
        object.__setattr__(self, "prices", tuple(int(p) for p in prices))
        object.__setattr__(self, "bands", bands)
        object.__setattr__(self, "season", Season(self.season))

    @classmethod
    def from_cents(cls, prices, bands, season, name: str = "") -> "TariffDay":
        """
        Build a tariff from prices in cents per kWh.

        Args:
            prices: 24 prices in cents/kWh (at most three decimals).
            bands: 24 Band labels or their string values.
            season: Season or its string value.
            name: Report label.

        Returns:
            TariffDay: The validated tariff.
        """
        try:
            millicents = tuple(cents_to_millicents(p) for p in prices)
        except ValueError as e:
            raise InvalidInputError(f"Tariff: {e}")
        return cls(millicents, tuple(bands), Season(season), name)

    @classmethod
    def flat(cls, cents, season=Season.WINTER, name: str = "flat") -> "TariffDay":
        """A single-price tariff labelled off-peak throughout."""
        return cls.from_cents([cents] * SLOTS_PER_DAY, [Band.OFF_PEAK] * SLOTS_PER_DAY, season, name)

    def price_cents(self, slot: int):
        """Price of one slot in cents/kWh, as an exact Decimal."""
        return millicents_to_cents(self.prices[slot])

    def as_array(self) -> np.ndarray:
        """Prices as an int64 array (milli-cents/kWh)."""
        return np.array(self.prices, dtype=np.int64)

    def slots_in_band(self, band: Band) -> frozenset[int]:
        return frozenset(t for t, b in enumerate(self.bands) if b is Band(band))


@dataclass(frozen=True, eq=True)
class Schedule:
    """
    Per-appliance 24-slot activation vectors.

    Construction only checks vector shape; rules that depend on the household
    are checked by ``validate_schedule``.
    """
    assignment: Mapping[str, tuple[bool, ...]] = field(default_factory=dict)

    def __post_init__(self):
        normalized = {}
        for appliance_id in sorted(self.assignment):
            vector = tuple(bool(v) for v in self.assignment[appliance_id])
            if len(vector) != SLOTS_PER_DAY:
                raise InvalidInputError(
                    f"Schedule for '{appliance_id}' has {len(vector)} slots, expected {SLOTS_PER_DAY}"
                )
            normalized[appliance_id] = vector
        object.__setattr__(self, "assignment", MappingProxyType(normalized))

    __hash__ = None

    def __reduce__(self):
        return type(self), (dict(self.assignment),)

    @classmethod
    def from_slots(cls, slots_by_id: Mapping[str, Iterable[int]]) -> "Schedule":
        """
        Build a schedule from the active slot indices of each appliance.

        Args:
            slots_by_id: Appliance id -> active slot indices.

        Returns:
            Schedule: Schedule with the given slots switched on.
        """
        assignment = {}
        for appliance_id, slots in slots_by_id.items():
            active = _slot_set(slots, f"Schedule for '{appliance_id}'")
            assignment[appliance_id] = tuple(t in active for t in range(SLOTS_PER_DAY))
        return cls(assignment)

    def active_slots(self, appliance_id: str) -> tuple[int, ...]:
        """Ascending active slot indices of one appliance."""
        return tuple(t for t, on in enumerate(self.assignment[appliance_id]) if on)

    def to_dict(self) -> dict[str, list[int]]:
        """0/1 activation vectors keyed by appliance id."""
        return {k: [int(v) for v in vector] for k, vector in self.assignment.items()}


@dataclass(frozen=True)
class Violation:
    """One broken schedule rule, naming the appliance and offending slots."""
    appliance: str
    rule: ViolationRule
    slots: tuple[int, ...]
    message: str


@dataclass(frozen=True)
class HouseholdScenario:
    """
    Appliances, precedence pairs and the "Without HEMS" baseline schedule.

    Attributes:
        appliances: Household loads.
        precedence: (predecessor, successor) id pairs; both uninterruptible.
        baseline: Schedule used when no optimizer runs.
        name: Report label.
    """
    appliances: tuple[Appliance, ...]
    precedence: tuple[tuple[str, str], ...] = ()
    baseline: Schedule | None = None
    name: str = ""

    def __post_init__(self):
        appliances = tuple(self.appliances)
        object.__setattr__(self, "appliances", appliances)
        object.__setattr__(self, "precedence", tuple((str(a), str(b)) for a, b in self.precedence))

        by_id = {}
        for appliance in appliances:
            if appliance.id in by_id:
                raise InvalidInputError(f"Duplicate appliance id '{appliance.id}'")
            by_id[appliance.id] = appliance
        object.__setattr__(self, "_by_id", MappingProxyType(by_id))

        for predecessor, successor in self.precedence:
            for appliance_id in (predecessor, successor):
                if appliance_id not in by_id:
                    raise InvalidInputError(f"Precedence refers to unknown appliance '{appliance_id}'")
                if by_id[appliance_id].kind is not ApplianceKind.FLEXIBLE_UNINTERRUPTIBLE:
                    raise InvalidInputError(
                        f"Precedence appliance '{appliance_id}' must be flexible uninterruptible"
                    )
            if predecessor == successor:
                raise InvalidInputError(f"Appliance '{predecessor}' cannot precede itself")
        self._check_chains(by_id)

        if self.baseline is None:
            object.__setattr__(self, "baseline", self._earliest_schedule())
        else:
            violations = validate_schedule(self.baseline, self)
            if violations:
                raise InfeasibleSchedule(violations)

    def __reduce__(self):
        return type(self), (self.appliances, self.precedence, self.baseline, self.name)

    def _check_chains(self, by_id):
        """Reject precedence cycles and chains that cannot fit in one day."""
        order = self.topological_precedence()
        longest = {}
        for predecessor, successor in order:
            start = longest.get(predecessor, by_id[predecessor].operating_slots)
            longest[predecessor] = start
            longest[successor] = max(longest.get(successor, 0), start + by_id[successor].operating_slots)
        for appliance_id, span in longest.items():
            if span > SLOTS_PER_DAY:
                raise InvalidInputError(
                    f"Precedence chain ending at '{appliance_id}' needs {span} slots, more than {SLOTS_PER_DAY}"
                )

    def _earliest_schedule(self) -> "Schedule":
        """Fixed profiles plus every flexible load as early as precedence allows."""
        starts = {a.id: 0 for a in self.appliances if a.kind is ApplianceKind.FLEXIBLE_UNINTERRUPTIBLE}
        for predecessor, successor in self.topological_precedence():
            end = starts[predecessor] + self._by_id[predecessor].operating_slots
            starts[successor] = max(starts[successor], end)

        slots = {}
        for appliance in self.appliances:
            if appliance.kind is ApplianceKind.FIXED:
                slots[appliance.id] = appliance.fixed_profile
            elif appliance.kind is ApplianceKind.FLEXIBLE_UNINTERRUPTIBLE:
                start = starts[appliance.id]
                slots[appliance.id] = range(start, start + appliance.operating_slots)
            else:
                slots[appliance.id] = range(appliance.operating_slots)
        return Schedule.from_slots(slots)

    def topological_precedence(self) -> tuple[tuple[str, str], ...]:
        """
        Precedence pairs ordered so every predecessor is placed before it is used.

        Raises:
            InvalidInputError: If the pairs contain a cycle.
        """
        remaining = list(self.precedence)
        placed = []
        while remaining:
            successors = {b for _, b in remaining}
            ready = [pair for pair in remaining if pair[0] not in successors]
            if not ready:
                raise InvalidInputError(f"Precedence pairs form a cycle: {remaining}")
            for pair in ready:
                remaining.remove(pair)
            placed.extend(ready)
        return tuple(placed)

    def appliance(self, appliance_id: str) -> Appliance:
        return self._by_id[appliance_id]

    def has_appliance(self, appliance_id: str) -> bool:
        return appliance_id in self._by_id

    @property
    def canonical_ids(self) -> tuple[str, ...]:
        """Appliance ids in canonical (lexicographic) order."""
        return tuple(sorted(self._by_id))

    @property
    def fixed(self) -> tuple[Appliance, ...]:
        return tuple(self._by_id[i] for i in self.canonical_ids if self._by_id[i].kind is ApplianceKind.FIXED)

    @property
    def uninterruptible(self) -> tuple[Appliance, ...]:
        return tuple(
            self._by_id[i] for i in self.canonical_ids
            if self._by_id[i].kind is ApplianceKind.FLEXIBLE_UNINTERRUPTIBLE
        )

    @property
    def interruptible(self) -> tuple[Appliance, ...]:
        return tuple(
            self._by_id[i] for i in self.canonical_ids
            if self._by_id[i].kind is ApplianceKind.FLEXIBLE_INTERRUPTIBLE
        )

    @property
    def flexible(self) -> tuple[Appliance, ...]:
        return tuple(self._by_id[i] for i in self.canonical_ids if self._by_id[i].is_flexible)


@dataclass(frozen=True)
class CostBreakdown:
    """
    Hourly and daily cost in cost units (1e-6 cent).

    ``hourly_tenths`` and ``total_tenths`` give the reporting view in tenths of
    a cent; the reported total is the sum of the reported hours.
    """
    hourly: tuple[int, ...]
    total: int

    def __post_init__(self):
        hourly = tuple(int(h) for h in self.hourly)
        if len(hourly) != SLOTS_PER_DAY:
            raise InvalidInputError(f"Cost breakdown needs {SLOTS_PER_DAY} hourly values, got {len(hourly)}")
        if int(self.total) != sum(hourly):
            raise InvalidInputError("Cost breakdown total must equal the sum of hourly costs")
        object.__setattr__(self, "hourly", hourly)
        object.__setattr__(self, "total", int(self.total))

    @classmethod
    def from_hourly(cls, hourly) -> "CostBreakdown":
        hourly = tuple(int(h) for h in hourly)
        return cls(hourly, sum(hourly))

    @property
    def hourly_tenths(self) -> tuple[int, ...]:
        return tuple(units_to_tenths(h) for h in self.hourly)

    @property
    def total_tenths(self) -> int:
        return sum(self.hourly_tenths)


# ============================================================================
# OPERATIONS
# ============================================================================

def _is_contiguous(slots: tuple[int, ...]) -> bool:
    return not slots or slots[-1] - slots[0] + 1 == len(slots)


def validate_schedule(schedule: Schedule, scenario: HouseholdScenario) -> list[Violation]:
    """
    Check a schedule against every rule of its household.

    Args:
        schedule: Candidate schedule.
        scenario: Household the schedule is meant for.

    Returns:
        list[Violation]: Empty iff the schedule is feasible. Violations are
        listed per appliance in canonical order, then per precedence pair.
    """
    violations = []
    assigned = schedule.assignment

    for appliance_id in sorted(set(assigned) - set(scenario.canonical_ids)):
        violations.append(Violation(
            appliance_id, ViolationRule.UNKNOWN, schedule.active_slots(appliance_id),
            f"'{appliance_id}' is not an appliance of this household",
        ))

    for appliance_id in scenario.canonical_ids:
        appliance = scenario.appliance(appliance_id)
        if appliance_id not in assigned:
            violations.append(Violation(
                appliance_id, ViolationRule.MISSING, (), f"'{appliance_id}' has no activation vector",
            ))
            continue

        active = schedule.active_slots(appliance_id)
        if len(active) != appliance.operating_slots:
            violations.append(Violation(
                appliance_id, ViolationRule.CARDINALITY, active,
                f"'{appliance_id}' runs {len(active)} slots, expected {appliance.operating_slots}",
            ))

        if appliance.kind is ApplianceKind.FIXED:
            mismatched = tuple(sorted(set(active) ^ appliance.fixed_profile))
            if mismatched:
                violations.append(Violation(
                    appliance_id, ViolationRule.FIXED_PROFILE, mismatched,
                    f"'{appliance_id}' deviates from its fixed profile at slots {list(mismatched)}",
                ))
        elif appliance.kind is ApplianceKind.FLEXIBLE_UNINTERRUPTIBLE and not _is_contiguous(active):
            violations.append(Violation(
                appliance_id, ViolationRule.CONTIGUITY, active,
                f"'{appliance_id}' is uninterruptible but runs in separate blocks {list(active)}",
            ))

    for predecessor, successor in scenario.precedence:
        if predecessor not in assigned or successor not in assigned:
            continue
        before = schedule.active_slots(predecessor)
        after = schedule.active_slots(successor)
        if not before or not after:
            continue
        earliest = before[-1] + 1
        early = tuple(t for t in after if t < earliest)
        if early:
            violations.append(Violation(
                successor, ViolationRule.PRECEDENCE, early,
                f"'{successor}' must start at or after slot {earliest} (after '{predecessor}'), starts at {after[0]}",
            ))

    return violations


def load_profile(schedule: Schedule, scenario: HouseholdScenario) -> tuple[int, ...]:
    """
    Household energy use in each slot.

    Args:
        schedule: Schedule whose ids belong to the scenario.
        scenario: Household providing the power ratings.

    Returns:
        tuple[int, ...]: Wh consumed in each of the 24 slots.
    """
    load = np.zeros(SLOTS_PER_DAY, dtype=np.int64)
    for appliance_id, vector in schedule.assignment.items():
        if scenario.has_appliance(appliance_id):
            load += scenario.appliance(appliance_id).power_wh * np.array(vector, dtype=np.int64)
    return tuple(int(x) for x in load)


def hourly_cost_units(load_wh, tariff: TariffDay) -> tuple[int, ...]:
    """Exact cost of a 24-slot load profile in cost units per slot."""
    return tuple(int(x) for x in np.asarray(load_wh, dtype=np.int64) * tariff.as_array())


def total_cost(schedule: Schedule, tariff: TariffDay, scenario: HouseholdScenario) -> CostBreakdown:
    """
    Price a feasible schedule on a tariff.

    hourly[t] is the sum over appliances active at t of power rating times
    price[t]; total is the sum of hourly costs.

    Args:
        schedule: Schedule to price.
        tariff: Tariff used for billing.
        scenario: Household the schedule belongs to.

    Returns:
        CostBreakdown: Exact hourly and total cost in cost units.

    Raises:
        InfeasibleSchedule: If validate_schedule reports any violation.
    """
    violations = validate_schedule(schedule, scenario)
    if violations:
        raise InfeasibleSchedule(violations)
    return CostBreakdown.from_hourly(hourly_cost_units(load_profile(schedule, scenario), tariff))


def peak_load(schedule: Schedule, scenario: HouseholdScenario) -> tuple[int, int]:
    """
    Highest hourly load of a schedule.

    Returns:
        tuple[int, int]: (slot, Wh) of the first slot with the highest load.
    """
    load = load_profile(schedule, scenario)
    peak = max(load)
    return load.index(peak), peak


def energy_by_band(schedule: Schedule, scenario: HouseholdScenario, tariff: TariffDay) -> dict[Band, int]:
    """Energy (Wh) consumed in each price band of a tariff."""
    totals = {band: 0 for band in Band}
    for slot, wh in enumerate(load_profile(schedule, scenario)):
        totals[tariff.bands[slot]] += wh
    return totals


def cost_reduction(reference_total: int, optimized_total: int) -> Fraction | None:
    """
    Percentage cost reduction of an optimized schedule against a reference.

    Args:
        reference_total: Reference cost (e.g. the baseline), cost units.
        optimized_total: Optimized cost, cost units.

    Returns:
        Fraction | None: 100 * (reference - optimized) / reference, or None when
        the reference costs nothing.

    Raises:
        InvalidInputError: If the reference cost is negative.
    """
    if reference_total < 0:
        raise InvalidInputError("Reference cost cannot be negative")
    if reference_total == 0:
        return None
    return Fraction(100 * (reference_total - optimized_total), reference_total)
