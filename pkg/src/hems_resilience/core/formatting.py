"""Money, percentage and slot formatting for reports."""

from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction

from .units import units_to_tenths


def format_tenths(tenths: int) -> str:
    """
    Format an amount in tenths of a cent as cents with one decimal digit.

    Args:
        tenths: Amount in tenths of a cent.

    Returns:
        str: Cents with '.' as decimal separator, e.g. "356.0".
    """
    sign = "-" if tenths < 0 else ""
    whole, tenth = divmod(abs(tenths), 10)
    return f"{sign}{whole}.{tenth}"


def format_units(units: int) -> str:
    """Format an amount in cost units as cents with one decimal digit."""
    return format_tenths(units_to_tenths(units))


def format_percent(value: Fraction | None, digits: int = 3) -> str:
    """
    Format an exact percentage with a fixed number of decimals.

    Args:
        value: Percentage as an exact rational, or None for undefined.
        digits: Decimal places to keep (rounded half to even).

    Returns:
        str: Formatted percentage, or "undefined" when value is None.
    """
    if value is None:
        return "undefined"
    exact = Decimal(value.numerator) / Decimal(value.denominator)
    quantum = Decimal(1).scaleb(-digits)
    rounded = exact.quantize(quantum, rounding=ROUND_HALF_EVEN)
    # "-0.000" reads badly in a CSV
    if rounded == 0:
        rounded = abs(rounded)
    return f"{rounded:f}"


def hour_label(slot: int) -> str:
    """
    Label an hourly slot with its 12-hour clock start, e.g. 0 -> "12 am", 18 -> "6 pm".

    Args:
        slot: Slot index in [0, 24).

    Returns:
        str: Clock label of the slot start.
    """
    if not 0 <= slot < 24:
        raise ValueError(f"Slot must be in [0, 24), got {slot}")
    hour = slot % 12 or 12
    suffix = "am" if slot < 12 else "pm"
    return f"{hour} {suffix}"


def format_slots(slots) -> str:
    """
    Format slot indices as compact ranges, e.g. {7, 8, 9, 10, 18, 19} -> "7-10,18-19".

    Args:
        slots: Iterable of slot indices.

    Returns:
        str: Comma-separated ranges in ascending order ("" for no slots).
    """
    ordered = sorted(set(slots))
    parts = []
    start = prev = None
    for slot in ordered:
        if start is None:
            start = prev = slot
        elif slot == prev + 1:
            prev = slot
        else:
            parts.append(f"{start}" if start == prev else f"{start}-{prev}")
            start = prev = slot
    if start is not None:
        parts.append(f"{start}" if start == prev else f"{start}-{prev}")
    return ",".join(parts)


def parse_slots(text: str) -> frozenset[int]:
    """
    Parse compact slot ranges as written by format_slots.

    Args:
        text: Ranges such as "7-10,18-19" or "3".

    Returns:
        frozenset[int]: The slot indices.

    Raises:
        ValueError: If a range is malformed or reversed.
    """
    slots = set()
    for part in text.split(","):
        part = part.strip()
        if not part:
            raise ValueError(f"Empty slot range in {text!r}")
        low, sep, high = part.partition("-")
        try:
            first = int(low)
            last = int(high) if sep else first
        except ValueError:
            raise ValueError(f"Malformed slot range {part!r}")
        if last < first:
            raise ValueError(f"Reversed slot range {part!r}")
        slots.update(range(first, last + 1))
    return frozenset(slots)
