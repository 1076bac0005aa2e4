"""Fixed-point energy, price and cost conversions."""

from decimal import Decimal, InvalidOperation
from fractions import Fraction

WH_PER_KWH = 1000
MILLICENTS_PER_CENT = 1000

# One cost unit is 1 Wh priced at 1 milli-cent/kWh, i.e. 1e-6 cent.
COST_UNITS_PER_CENT = WH_PER_KWH * MILLICENTS_PER_CENT
COST_UNITS_PER_TENTH = COST_UNITS_PER_CENT // 10


def _to_scaled_int(value, scale: int, what: str) -> int:
    """
    Convert a decimal quantity to an exact integer multiple of 1/scale.

    Args:
        value: Number or numeric string.
        scale: Integer scale (1000 for three decimals).
        what: Name used in error messages.

    Returns:
        int: value * scale, exactly.

    Raises:
        ValueError: If the value is not numeric or has more precision than the scale allows.
    """
    if isinstance(value, bool):
        raise ValueError(f"{what} must be a number, got {value!r}")
    if isinstance(value, Fraction):
        scaled = value * scale
    else:
        try:
            scaled = Decimal(str(value)) * scale
        except InvalidOperation:
            raise ValueError(f"{what} must be a number, got {value!r}")
        if not scaled.is_finite():
            raise ValueError(f"{what} must be finite, got {value!r}")
    if scaled != int(scaled):
        raise ValueError(f"{what} {value!r} has more than {len(str(scale)) - 1} decimals")
    return int(scaled)


def kwh_to_wh(kwh) -> int:
    """
    Convert kilowatt-hours to integer watt-hours.

    Args:
        kwh: Energy in kWh with at most three decimals.

    Returns:
        int: Energy in Wh.
    """
    return _to_scaled_int(kwh, WH_PER_KWH, "Energy")


def wh_to_kwh(wh: int) -> Decimal:
    """Convert integer watt-hours back to an exact kWh decimal."""
    return Decimal(wh) / WH_PER_KWH


def cents_to_millicents(cents) -> int:
    """
    Convert a price in cents/kWh to integer milli-cents/kWh.

    Args:
        cents: Price in cents/kWh with at most three decimals.

    Returns:
        int: Price in milli-cents/kWh.
    """
    return _to_scaled_int(cents, MILLICENTS_PER_CENT, "Price")


def millicents_to_cents(millicents: int) -> Decimal:
    """Convert integer milli-cents back to an exact cents decimal."""
    return Decimal(millicents) / MILLICENTS_PER_CENT


def quantize_millicents(price: Fraction) -> int:
    """
    Round an exact rational price (in milli-cents) to the nearest milli-cent.

    Ties round half to even, which is what ``round`` does for Fractions.
    """
    return round(Fraction(price))


def cents_to_units(cents) -> int:
    """
    Convert an amount of money in cents to cost units.

    Args:
        cents: Amount in cents with at most six decimals.

    Returns:
        int: Amount in cost units (1e-6 cent).
    """
    return _to_scaled_int(cents, COST_UNITS_PER_CENT, "Amount")


def units_to_tenths(units: int) -> int:
    """
    Round cost units to whole tenths of a cent, half to even.

    Args:
        units: Amount in cost units.

    Returns:
        int: Amount in tenths of a cent.
    """
    return round(Fraction(units, COST_UNITS_PER_TENTH))


def units_to_cents(units: int) -> Fraction:
    """Convert cost units to an exact amount in cents."""
    return Fraction(units, COST_UNITS_PER_CENT)
