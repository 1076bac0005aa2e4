"""
Forged time-of-use tariffs.

An attack rewrites the price signal a HEMS reads; the tariff the household is
billed on is never touched. Four attack shapes are modelled:

- ``Scale``: the meter reads amplified (or damped) prices, on all or some slots.
- ``Delay``: the meter replays prices from ``hours`` earlier.
- ``PeakLower``: chosen slots are overwritten with a lower price.
- ``PeakShift``: prices of two equal-size slot groups are swapped pairwise.

Composition keeps prices as exact rationals (milli-cents) and quantizes once at
the end, so inverse pairs such as scale 2 then scale 0.5 are exact identities.
"""

import logging
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from numbers import Integral

from .core.errors import InvalidAttack
from .core.formatting import format_slots, parse_slots
from .core.model import SLOTS_PER_DAY, Band, Season, TariffDay
from .core.scenario import default_tariff
from .core.units import MILLICENTS_PER_CENT, quantize_millicents

logger = logging.getLogger(__name__)


# ============================================================================
# ATTACK TYPES
# ============================================================================

def _rational(value, what: str) -> Fraction:
    """Exact rational from an int, Fraction, Decimal or numeric string (floats via their repr)."""
    if isinstance(value, bool):
        raise InvalidAttack(f"{what} must be a number, got {value!r}")
    try:
        if isinstance(value, float):
            value = str(value)
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise InvalidAttack(f"{what} must be a number, got {value!r}")


def _slots(slots, what: str) -> frozenset[int]:
    try:
        slots = list(slots)
    except TypeError:
        raise InvalidAttack(f"{what} must be a collection of slots, got {slots!r}")
    not_integers = [s for s in slots if isinstance(s, bool) or not isinstance(s, Integral)]
    if not_integers:
        raise InvalidAttack(f"{what} must be whole slot numbers, got {not_integers}")
    result = frozenset(int(s) for s in slots)
    if not result:
        raise InvalidAttack(f"{what} must name at least one slot")
    out_of_range = sorted(s for s in result if not 0 <= s < SLOTS_PER_DAY)
    if out_of_range:
        raise InvalidAttack(f"{what} has slots outside [0, {SLOTS_PER_DAY}): {out_of_range}")
    return result


@dataclass(frozen=True)
class Scale:
    """Multiply prices by ``factor`` on ``slots`` (every slot when None)."""
    factor: Fraction
    slots: frozenset[int] | None = None

    def __post_init__(self):
        factor = _rational(self.factor, "Scale factor")
        if factor <= 0:
            raise InvalidAttack(f"Scale factor must be positive, got {factor}")
        object.__setattr__(self, "factor", factor)
        if self.slots is not None:
            object.__setattr__(self, "slots", _slots(self.slots, "Scale slots"))


@dataclass(frozen=True)
class Delay:
    """Replay old prices: forged price[t] = true price[(t - hours) mod 24]."""
    hours: int

    def __post_init__(self):
        if isinstance(self.hours, bool) or not isinstance(self.hours, int):
            raise InvalidAttack(f"Delay hours must be an integer, got {self.hours!r}")
        if not 0 <= self.hours < SLOTS_PER_DAY:
            raise InvalidAttack(f"Delay hours must be in [0, {SLOTS_PER_DAY}), got {self.hours}")


@dataclass(frozen=True)
class PeakLower:
    """Overwrite the price of ``slots`` with ``new_price`` cents/kWh."""
    new_price: Fraction
    slots: frozenset[int]

    def __post_init__(self):
        price = _rational(self.new_price, "PeakLower price")
        if price <= 0:
            raise InvalidAttack(f"PeakLower price must be positive, got {price}")
        object.__setattr__(self, "new_price", price)
        object.__setattr__(self, "slots", _slots(self.slots, "PeakLower slots"))


@dataclass(frozen=True)
class PeakShift:
    """
    Swap prices between ``from_slots`` and ``to_slots``.

    Slots are paired in ascending order: the smallest "from" slot with the
    smallest "to" slot, and so on. Applying the same shift twice restores
    the original prices.
    """
    from_slots: frozenset[int]
    to_slots: frozenset[int]

    def __post_init__(self):
        source = _slots(self.from_slots, "PeakShift source slots")
        target = _slots(self.to_slots, "PeakShift target slots")
        if len(source) != len(target):
            raise InvalidAttack(
                f"PeakShift needs equal-size slot groups, got {len(source)} and {len(target)}"
            )
        if source & target:
            raise InvalidAttack(f"PeakShift slot groups overlap at {sorted(source & target)}")
        object.__setattr__(self, "from_slots", source)
        object.__setattr__(self, "to_slots", target)

    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(sorted(self.from_slots), sorted(self.to_slots)))


AttackSpec = Scale | Delay | PeakLower | PeakShift


@dataclass(frozen=True)
class BandThresholds:
    """
    Price thresholds (cents/kWh) used to relabel bands on forged tariffs.

    A slot is peak when its price is at least ``peak``, mid-peak when it is
    at least ``mid_peak``, off-peak otherwise.
    """
    mid_peak: Fraction
    peak: Fraction

    def __post_init__(self):
        mid_peak = _rational(self.mid_peak, "Mid-peak threshold")
        peak = _rational(self.peak, "Peak threshold")
        if mid_peak <= 0 or peak < mid_peak:
            raise InvalidAttack(f"Band thresholds need 0 < mid_peak <= peak, got {mid_peak} and {peak}")
        object.__setattr__(self, "mid_peak", mid_peak)
        object.__setattr__(self, "peak", peak)

    def band(self, millicents: int) -> Band:
        if millicents >= self.peak * MILLICENTS_PER_CENT:
            return Band.PEAK
        if millicents >= self.mid_peak * MILLICENTS_PER_CENT:
            return Band.MID_PEAK
        return Band.OFF_PEAK


# ============================================================================
# APPLYING ATTACKS
# ============================================================================

def _forge(prices: list[Fraction], attack: AttackSpec) -> list[Fraction]:
    """One attack over exact milli-cent prices."""
    if isinstance(attack, Scale):
        slots = range(SLOTS_PER_DAY) if attack.slots is None else attack.slots
        forged = list(prices)
        for t in slots:
            forged[t] = prices[t] * attack.factor
        return forged
    if isinstance(attack, Delay):
        return [prices[(t - attack.hours) % SLOTS_PER_DAY] for t in range(SLOTS_PER_DAY)]
    if isinstance(attack, PeakLower):
        forged = list(prices)
        for t in attack.slots:
            forged[t] = attack.new_price * MILLICENTS_PER_CENT
        return forged
    if isinstance(attack, PeakShift):
        forged = list(prices)
        for source, target in attack.pairs():
            forged[source], forged[target] = prices[target], prices[source]
        return forged
    raise InvalidAttack(f"Unknown attack {attack!r}")


def compose_attacks(tariff: TariffDay, attacks, band_thresholds: BandThresholds | None = None) -> TariffDay:
    """
    Apply attacks left to right.

    Args:
        tariff: True tariff (left unchanged).
        attacks: Ordered attack specs; an empty list returns an equal tariff.
        band_thresholds: Relabel bands from forged prices when given; bands
            are copied verbatim otherwise.

    Returns:
        TariffDay: The forged tariff, prices rounded half to even to milli-cents.

    Raises:
        InvalidAttack: If an attack is malformed or forges a price that rounds
            to zero; ``index`` names the failing attack.
    """
    attacks = list(attacks)
    prices = [Fraction(p) for p in tariff.prices]
    for index, attack in enumerate(attacks):
        if not isinstance(attack, (Scale, Delay, PeakLower, PeakShift)):
            raise InvalidAttack(f"Not an attack spec: {attack!r}", index)
        prices = _forge(prices, attack)
        for slot, price in enumerate(prices):
            if quantize_millicents(price) <= 0:
                raise InvalidAttack(f"forged price at slot {slot} rounds to zero milli-cents", index)

    forged = tuple(quantize_millicents(p) for p in prices)
    if band_thresholds is None:
        bands = tariff.bands
    else:
        bands = tuple(band_thresholds.band(p) for p in forged)
    logger.debug("Forged tariff '%s' with %d attacks", tariff.name, len(attacks))
    return TariffDay(forged, bands, tariff.season, tariff.name)


def apply_attack(tariff: TariffDay, attack: AttackSpec, band_thresholds: BandThresholds | None = None) -> TariffDay:
    """
    Forge a tariff with a single attack.

    Args:
        tariff: True tariff (left unchanged).
        attack: Attack spec.
        band_thresholds: Optional band relabelling.

    Returns:
        TariffDay: The forged tariff.

    Raises:
        InvalidAttack: If the attack cannot be applied.
    """
    try:
        return compose_attacks(tariff, [attack], band_thresholds)
    except InvalidAttack as e:
        raise InvalidAttack(e.reason)


# ============================================================================
# TEXTUAL FORM
# ============================================================================

def _format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    denominator = value.denominator
    for prime in (2, 5):
        while denominator % prime == 0:
            denominator //= prime
    if denominator != 1:
        return f"{value.numerator}/{value.denominator}"
    return format(Decimal(value.numerator) / Decimal(value.denominator), "f")


def _parse_slot_text(text: str, what: str) -> frozenset[int]:
    try:
        return parse_slots(text)
    except ValueError as e:
        raise InvalidAttack(f"{what}: {e}")


def parse_attack(text: str) -> AttackSpec:
    """
    Parse the compact attack form.

    Forms: ``scale:1.5``, ``scale:2@7-10``, ``delay:3``,
    ``lower:10.1@7-10,18-19`` and ``shift:7-10>0-3``. Factors and prices
    accept decimals or ``p/q`` rationals.

    Args:
        text: Attack text.

    Returns:
        AttackSpec: The parsed attack.

    Raises:
        InvalidAttack: If the text is malformed or the attack invalid.
    """
    kind, sep, body = text.strip().partition(":")
    kind = kind.strip().lower()
    if not sep or not body:
        raise InvalidAttack(f"Malformed attack {text!r}; expected kind:arguments")

    if kind == "scale":
        factor, at, slots = body.partition("@")
        return Scale(factor.strip(), _parse_slot_text(slots, "scale slots") if at else None)
    if kind == "delay":
        try:
            hours = int(body)
        except ValueError:
            raise InvalidAttack(f"Delay hours must be an integer, got {body!r}")
        return Delay(hours)
    if kind == "lower":
        price, at, slots = body.partition("@")
        if not at:
            raise InvalidAttack(f"lower needs slots, e.g. lower:10.1@7-10, got {text!r}")
        return PeakLower(price.strip(), _parse_slot_text(slots, "lower slots"))
    if kind == "shift":
        source, arrow, target = body.partition(">")
        if not arrow:
            raise InvalidAttack(f"shift needs from>to slots, e.g. shift:7-10>0-3, got {text!r}")
        return PeakShift(_parse_slot_text(source, "shift source"), _parse_slot_text(target, "shift target"))
    raise InvalidAttack(f"Unknown attack kind {kind!r}; expected scale, delay, lower or shift")


def format_attack(attack: AttackSpec) -> str:
    """Compact text of an attack; parse_attack(format_attack(a)) == a."""
    if isinstance(attack, Scale):
        factor = _format_rational(attack.factor)
        return f"scale:{factor}" if attack.slots is None else f"scale:{factor}@{format_slots(attack.slots)}"
    if isinstance(attack, Delay):
        return f"delay:{attack.hours}"
    if isinstance(attack, PeakLower):
        return f"lower:{_format_rational(attack.new_price)}@{format_slots(attack.slots)}"
    if isinstance(attack, PeakShift):
        return f"shift:{format_slots(attack.from_slots)}>{format_slots(attack.to_slots)}"
    raise InvalidAttack(f"Unknown attack {attack!r}")


def winter_peak_lower(new_price="10.1", tariff: TariffDay | None = None) -> PeakLower:
    """
    PeakLower attack on every peak-band slot of a tariff.

    Args:
        new_price: Forged peak price in cents/kWh.
        tariff: Tariff whose peak slots are attacked (shipped winter tariff by default).

    Returns:
        PeakLower: The attack.
    """
    if tariff is None:
        tariff = default_tariff(Season.WINTER)
    return PeakLower(new_price, tariff.slots_in_band(Band.PEAK))
