"""Random oracle-solvable households and tariffs for benchmarking the heuristics."""

import numpy as np

from ..core.model import SLOTS_PER_DAY, Appliance, ApplianceKind, Band, HouseholdScenario, Season, TariffDay
from .encoding import domain_size

POWER_CHOICES_WH = (75, 100, 480, 700, 1440, 1800, 2300, 4450)


def random_tariff(rng: np.random.Generator, low_cents: int = 5, high_cents: int = 25) -> TariffDay:
    """
    Random whole-cent tariff; bands split the price range into thirds.

    Args:
        rng: Random generator.
        low_cents: Lowest possible price.
        high_cents: Highest possible price.

    Returns:
        TariffDay: Winter-tagged tariff named "random".
    """
    cents = [int(c) for c in rng.integers(low_cents, high_cents + 1, size=SLOTS_PER_DAY)]
    span = high_cents - low_cents
    bands = [
        Band.OFF_PEAK if c < low_cents + span / 3 else Band.MID_PEAK if c < low_cents + 2 * span / 3 else Band.PEAK
        for c in cents
    ]
    return TariffDay.from_cents(cents, bands, Season.WINTER, "random")


def random_scenario(rng: np.random.Generator, n_flexible: int = 2, max_space: int = 200_000,
                    fixed_appliances: int = 1) -> HouseholdScenario:
    """
    Random household whose flexible search space stays oracle-sized.

    Interruptible loads run 1-3 or 21-23 slots so their slot-set domains stay
    small; when two uninterruptible loads are drawn they are linked by a
    precedence pair half of the time. Draws repeat until the search space is
    at most ``max_space``.

    Args:
        rng: Random generator.
        n_flexible: Number of flexible appliances.
        max_space: Upper bound on the oracle's search space.
        fixed_appliances: Number of fixed loads to add.

    Returns:
        HouseholdScenario: A valid household with its earliest-start baseline.
    """
    while True:
        appliances = []
        for index in range(fixed_appliances):
            length = int(rng.integers(1, SLOTS_PER_DAY + 1))
            start = int(rng.integers(0, SLOTS_PER_DAY - length + 1))
            appliances.append(Appliance(
                f"fixed-{index}", ApplianceKind.FIXED, int(rng.choice(POWER_CHOICES_WH)), length,
                frozenset(range(start, start + length)),
            ))

        for index in range(n_flexible):
            power = int(rng.choice(POWER_CHOICES_WH))
            if rng.random() < 0.5:
                slots = int(rng.integers(1, 13))
                appliances.append(Appliance(f"shift-{index}", ApplianceKind.FLEXIBLE_UNINTERRUPTIBLE, power, slots))
            else:
                slots = int(rng.choice([1, 2, 3, 21, 22, 23]))
                appliances.append(Appliance(f"split-{index}", ApplianceKind.FLEXIBLE_INTERRUPTIBLE, power, slots))

        flexible = [a for a in appliances if a.is_flexible]
        space = int(np.prod([domain_size(a) for a in flexible], dtype=object))
        if space > max_space:
            continue

        shiftable = [a for a in flexible if a.kind is ApplianceKind.FLEXIBLE_UNINTERRUPTIBLE]
        precedence = ()
        if len(shiftable) >= 2 and rng.random() < 0.5:
            first, second = shiftable[0], shiftable[1]
            if first.operating_slots + second.operating_slots <= SLOTS_PER_DAY:
                precedence = ((first.id, second.id),)
        return HouseholdScenario(tuple(appliances), precedence, None, "random")
