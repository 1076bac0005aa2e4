"""
Scenario and tariff files.

Both are JSON documents. Parse errors and invariant breaches are reported as
``ScenarioFileError`` anchored to the line of the offending entry. The shipped
defaults live in the package ``data`` directory.
"""

import json
import logging
import re
from decimal import Decimal
from pathlib import Path

from .errors import InfeasibleSchedule, InvalidInputError, ScenarioFileError
from .model import (
    SLOTS_PER_DAY,
    Appliance,
    ApplianceKind,
    Band,
    HouseholdScenario,
    Schedule,
    Season,
    TariffDay,
    validate_schedule,
)
from .units import millicents_to_cents

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

TABLE1_SCENARIO_FILE = DATA_DIR / "table1_scenario.json"
TARIFF_FILES = {
    Season.SUMMER: DATA_DIR / "tou_summer.json",
    Season.WINTER: DATA_DIR / "tou_winter.json",
}

SCENARIO_KEYS = {"name", "note", "appliances", "precedence", "baseline"}
APPLIANCE_KEYS = {"id", "kind", "power_rating", "operating_slots", "fixed_profile"}
TARIFF_KEYS = {"name", "note", "season", "prices", "bands"}


# ============================================================================
# SOURCE HELPERS
# ============================================================================

def read_json(path) -> tuple[dict, str]:
    """
    Read a JSON object, keeping decimals exact.

    Args:
        path: File to read.

    Returns:
        tuple[dict, str]: Parsed document and its source text.

    Raises:
        ScenarioFileError: If the file is missing, unreadable or not a JSON object.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ScenarioFileError(path, None, "file not found")
    except OSError as e:
        raise ScenarioFileError(path, None, f"cannot read file: {e.strerror}")
    try:
        data = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as e:
        raise ScenarioFileError(path, e.lineno, f"invalid JSON: {e.msg}")
    if not isinstance(data, dict):
        raise ScenarioFileError(path, 1, "top level must be a JSON object")
    return data, text


def locate(text: str, *patterns: str) -> int | None:
    """
    Line number of a sequence of regex patterns, each searched after the previous match.

    Args:
        text: Source text.
        patterns: Regular expressions to match in order.

    Returns:
        int | None: 1-based line of the last match, or None if any pattern is missing.
    """
    position = 0
    for pattern in patterns:
        match = re.compile(pattern).search(text, position)
        if match is None:
            return None
        position = match.start()
    return text.count("\n", 0, position) + 1


def key_pattern(key: str) -> str:
    return re.escape(json.dumps(key)) + r"\s*:"


def _entry_pattern(key: str, value: str) -> str:
    return key_pattern(key) + r"\s*" + re.escape(json.dumps(value))


def _reject_unknown_keys(mapping: dict, allowed: set, path, text: str, *anchor: str):
    unknown = sorted(set(mapping) - allowed)
    if unknown:
        line = locate(text, *anchor, key_pattern(unknown[0]))
        raise ScenarioFileError(path, line, f"unknown key(s) {unknown}; allowed: {sorted(allowed)}")


def _require(mapping: dict, key: str, path, text: str, *anchor: str):
    if key not in mapping:
        raise ScenarioFileError(path, locate(text, *anchor) if anchor else 1, f"missing required key '{key}'")
    return mapping[key]


def _slot_list(value, path, line, what: str) -> list[int]:
    if not isinstance(value, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        raise ScenarioFileError(path, line, f"{what} must be a list of integer slot indices")
    return value


# ============================================================================
# SCENARIO FILES
# ============================================================================

def parse_scenario(data: dict, text: str, path) -> HouseholdScenario:
    """
    Build a scenario from a parsed scenario document.

    Args:
        data: Parsed JSON object.
        text: Source text, used to anchor error lines.
        path: Source path for messages.

    Returns:
        HouseholdScenario: The validated household.

    Raises:
        ScenarioFileError: If the document violates the schema or a type invariant.
        InfeasibleSchedule: If the baseline breaks a schedule rule.
    """
    _reject_unknown_keys(data, SCENARIO_KEYS, path, text)
    raw_appliances = _require(data, "appliances", path, text)
    if not isinstance(raw_appliances, list):
        raise ScenarioFileError(path, locate(text, key_pattern("appliances")), "'appliances' must be a list")

    appliances = []
    seen = set()
    for index, raw in enumerate(raw_appliances):
        if not isinstance(raw, dict):
            raise ScenarioFileError(path, locate(text, key_pattern("appliances")), f"appliance #{index} must be an object")
        appliance_id = _require(raw, "id", path, text, key_pattern("appliances"))
        if not isinstance(appliance_id, str) or not appliance_id:
            raise ScenarioFileError(
                path, locate(text, key_pattern("appliances")), f"appliance #{index} id must be a non-empty string"
            )
        anchor = (key_pattern("appliances"), _entry_pattern("id", str(appliance_id)))
        line = locate(text, *anchor)
        if appliance_id in seen:
            raise ScenarioFileError(path, line, f"duplicate appliance id '{appliance_id}'")
        seen.add(appliance_id)
        _reject_unknown_keys(raw, APPLIANCE_KEYS, path, text, *anchor)
        for key in ("kind", "power_rating", "operating_slots"):
            _require(raw, key, path, text, *anchor)
        try:
            kind = ApplianceKind(raw["kind"])
        except ValueError:
            allowed = [k.value for k in ApplianceKind]
            raise ScenarioFileError(path, line, f"appliance '{appliance_id}': kind must be one of {allowed}")
        profile = raw.get("fixed_profile")
        if profile is not None:
            profile = _slot_list(profile, path, line, f"appliance '{appliance_id}' fixed_profile")
            if len(set(profile)) != len(profile):
                raise ScenarioFileError(path, line, f"appliance '{appliance_id}': fixed_profile repeats a slot")
        try:
            appliances.append(Appliance.from_kwh(
                appliance_id, kind, raw["power_rating"], raw["operating_slots"], profile,
            ))
        except InvalidInputError as e:
            raise ScenarioFileError(path, line, str(e))

    raw_precedence = data.get("precedence", [])
    precedence_line = locate(text, key_pattern("precedence"))
    if not isinstance(raw_precedence, list) or not all(
        isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, str) for x in pair)
        for pair in raw_precedence
    ):
        raise ScenarioFileError(path, precedence_line, "'precedence' must be a list of [predecessor, successor] pairs")

    baseline = None
    baseline_line = locate(text, key_pattern("baseline"))
    if "baseline" in data:
        raw_baseline = data["baseline"]
        if not isinstance(raw_baseline, dict):
            raise ScenarioFileError(path, baseline_line, "'baseline' must map appliance ids to activation vectors")
        vectors = {}
        for appliance_id, vector in raw_baseline.items():
            line = locate(text, key_pattern("baseline"), key_pattern(appliance_id))
            if not isinstance(vector, list) or len(vector) != SLOTS_PER_DAY or any(v not in (0, 1) for v in vector):
                raise ScenarioFileError(
                    path, line, f"baseline for '{appliance_id}' must be {SLOTS_PER_DAY} values of 0 or 1",
                )
            vectors[appliance_id] = [bool(v) for v in vector]
        baseline = Schedule(vectors)

    try:
        scenario = HouseholdScenario(
            tuple(appliances), tuple(tuple(pair) for pair in raw_precedence), None, str(data.get("name", "")),
        )
    except InvalidInputError as e:
        raise ScenarioFileError(path, precedence_line, str(e))

    if baseline is not None:
        violations = validate_schedule(baseline, scenario)
        if violations:
            raise InfeasibleSchedule(violations, location=f"{path}:{baseline_line}")
        scenario = HouseholdScenario(scenario.appliances, scenario.precedence, baseline, scenario.name)

    logger.debug("Loaded scenario %r with %d appliances from %s", scenario.name, len(appliances), path)
    return scenario


def load_scenario(path) -> HouseholdScenario:
    """
    Load and validate a scenario file.

    Args:
        path: Path to a scenario JSON file.

    Returns:
        HouseholdScenario: The validated household.
    """
    data, text = read_json(path)
    return parse_scenario(data, text, path)


def scenario_to_dict(scenario: HouseholdScenario) -> dict:
    """
    Serialize a scenario to the scenario file schema.

    Args:
        scenario: Household to serialize.

    Returns:
        dict: JSON-ready document that load_scenario accepts.
    """
    appliances = []
    for appliance in scenario.appliances:
        entry = {
            "id": appliance.id,
            "kind": appliance.kind.value,
            "power_rating": float(appliance.power_rating),
            "operating_slots": appliance.operating_slots,
        }
        if appliance.fixed_profile is not None:
            entry["fixed_profile"] = sorted(appliance.fixed_profile)
        appliances.append(entry)
    return {
        "name": scenario.name,
        "appliances": appliances,
        "precedence": [list(pair) for pair in scenario.precedence],
        "baseline": scenario.baseline.to_dict(),
    }


def make_table1_scenario() -> HouseholdScenario:
    """
    The eight-appliance household shipped with the package.

    Ratings and operating times follow the published appliance table; fixed
    profiles and the "Without HEMS" baseline come from the shipped scenario file.

    Returns:
        HouseholdScenario: The default household with precedence washing machine -> iron.
    """
    return load_scenario(TABLE1_SCENARIO_FILE)


# ============================================================================
# TARIFF FILES
# ============================================================================

def parse_tariff(data: dict, text: str, path) -> TariffDay:
    """
    Build a tariff from a parsed tariff document.

    Args:
        data: Parsed JSON object.
        text: Source text, used to anchor error lines.
        path: Source path for messages.

    Returns:
        TariffDay: The validated tariff.

    Raises:
        ScenarioFileError: If the document violates the schema or a type invariant.
    """
    _reject_unknown_keys(data, TARIFF_KEYS, path, text)
    season = _require(data, "season", path, text)
    prices = _require(data, "prices", path, text)
    bands = _require(data, "bands", path, text)
    prices_line = locate(text, key_pattern("prices"))
    bands_line = locate(text, key_pattern("bands"))

    try:
        season = Season(season)
    except ValueError:
        raise ScenarioFileError(path, locate(text, key_pattern("season")),
                                f"season must be one of {[s.value for s in Season]}")
    if not isinstance(prices, list) or len(prices) != SLOTS_PER_DAY:
        raise ScenarioFileError(path, prices_line, f"'prices' must hold exactly {SLOTS_PER_DAY} values")
    if not isinstance(bands, list) or len(bands) != SLOTS_PER_DAY:
        raise ScenarioFileError(path, bands_line, f"'bands' must hold exactly {SLOTS_PER_DAY} labels")
    allowed_bands = {b.value for b in Band}
    for slot, label in enumerate(bands):
        if label not in allowed_bands:
            raise ScenarioFileError(path, bands_line, f"band at slot {slot} must be one of {sorted(allowed_bands)}, got {label!r}")
    for slot, price in enumerate(prices):
        if isinstance(price, bool) or not isinstance(price, (int, Decimal)):
            raise ScenarioFileError(path, prices_line, f"price at slot {slot} must be a number")
        if price <= 0:
            raise ScenarioFileError(path, prices_line, f"price at slot {slot} must be positive, got {price}")

    try:
        tariff = TariffDay.from_cents(prices, bands, season, str(data.get("name", "")))
    except InvalidInputError as e:
        raise ScenarioFileError(path, prices_line, str(e))
    logger.debug("Loaded %s tariff %r from %s", tariff.season.value, tariff.name, path)
    return tariff


def load_tariff(path) -> TariffDay:
    """
    Load and validate a tariff file.

    Args:
        path: Path to a tariff JSON file.

    Returns:
        TariffDay: The validated tariff.
    """
    data, text = read_json(path)
    return parse_tariff(data, text, path)


def tariff_to_dict(tariff: TariffDay) -> dict:
    """Serialize a tariff to the tariff file schema."""
    return {
        "name": tariff.name,
        "season": tariff.season.value,
        "prices": [float(millicents_to_cents(p)) for p in tariff.prices],
        "bands": [b.value for b in tariff.bands],
    }


def default_tariff(season) -> TariffDay:
    """Load the shipped summer or winter tariff."""
    return load_tariff(TARIFF_FILES[Season(season)])
