"""
Shared fixtures: the shipped household and tariffs plus a few small households
the exhaustive-search oracle can solve.
"""

import json

import pytest

from hems_resilience.core.model import Appliance, ApplianceKind, HouseholdScenario, Season, TariffDay
from hems_resilience.core.scenario import default_tariff, make_table1_scenario


@pytest.fixture(scope="session")
def table1():
    return make_table1_scenario()


@pytest.fixture(scope="session")
def winter():
    return default_tariff(Season.WINTER)


@pytest.fixture(scope="session")
def summer():
    return default_tariff(Season.SUMMER)


@pytest.fixture
def laundry():
    """Washing machine then iron, nothing else."""
    return HouseholdScenario((
        Appliance.from_kwh("washing machine", ApplianceKind.FLEXIBLE_UNINTERRUPTIBLE, "0.7", 8),
        Appliance.from_kwh("iron", ApplianceKind.FLEXIBLE_UNINTERRUPTIBLE, "1.8", 7),
    ), (("washing machine", "iron"),), name="laundry")


@pytest.fixture
def small_mixed():
    """One load of each kind, small enough for the oracle."""
    return HouseholdScenario((
        Appliance.from_kwh("lamp", ApplianceKind.FIXED, "0.1", 3, {18, 19, 20}),
        Appliance.from_kwh("dryer", ApplianceKind.FLEXIBLE_UNINTERRUPTIBLE, "1.2", 3),
        Appliance.from_kwh("heater", ApplianceKind.FLEXIBLE_INTERRUPTIBLE, "2", 2),
    ), name="small")


@pytest.fixture
def ramp_tariff():
    """Prices 1..24 cents rising through the day, all off-peak."""
    return TariffDay.from_cents(list(range(1, 25)), ["off_peak"] * 24, Season.WINTER, "ramp")


@pytest.fixture
def write_json(tmp_path):
    """Write a JSON document (or raw text) under tmp_path and return its path."""
    def _write(name, document):
        path = tmp_path / name
        text = document if isinstance(document, str) else json.dumps(document, indent=2)
        path.write_text(text, encoding="utf-8")
        return path
    return _write
