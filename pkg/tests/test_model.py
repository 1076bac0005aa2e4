"""
Unit tests for the household model: appliances, tariffs, schedules and pricing.
"""

from decimal import Decimal
from fractions import Fraction

import pytest

from hems_resilience.core.errors import InfeasibleSchedule, InvalidInputError
from hems_resilience.core.model import (
    Appliance,
    ApplianceKind,
    Band,
    CostBreakdown,
    HouseholdScenario,
    Schedule,
    Season,
    TariffDay,
    ViolationRule,
    cost_reduction,
    energy_by_band,
    load_profile,
    peak_load,
    total_cost,
    validate_schedule,
)
from hems_resilience.core.units import cents_to_units


# ============================================================================
# SHARED FIXTURES
# ============================================================================

@pytest.fixture
def water_heater_only():
    return HouseholdScenario((
        Appliance.from_kwh("water heater", ApplianceKind.FLEXIBLE_INTERRUPTIBLE, "4.45", 8),
    ))


def laundry_schedule(washing_machine, iron):
    return Schedule.from_slots({"washing machine": washing_machine, "iron": iron})


class TestAppliance:

    @pytest.mark.parametrize("kwargs,description", [
        (dict(power_rating="0", operating_slots=3), "zero power"),
        (dict(power_rating="-1", operating_slots=3), "negative power"),
        (dict(power_rating="1", operating_slots=0), "no slots"),
        (dict(power_rating="1", operating_slots=25), "more than a day"),
        (dict(power_rating="0.0001", operating_slots=3), "sub-Wh rating"),
    ])
    def test_invalid_flexible(self, kwargs, description):
        with pytest.raises(InvalidInputError):
            Appliance.from_kwh("x", ApplianceKind.FLEXIBLE_INTERRUPTIBLE, **kwargs)

    def test_fixed_needs_profile(self):
        with pytest.raises(InvalidInputError):
            Appliance.from_kwh("tv", ApplianceKind.FIXED, "0.48", 7)

    def test_fixed_profile_size_must_match(self):
        with pytest.raises(InvalidInputError):
            Appliance.from_kwh("tv", ApplianceKind.FIXED, "0.48", 7, {16, 17, 18})

    def test_fixed_profile_in_range(self):
        with pytest.raises(InvalidInputError):
            Appliance.from_kwh("tv", ApplianceKind.FIXED, "0.48", 2, {23, 24})

    def test_flexible_rejects_profile(self):
        with pytest.raises(InvalidInputError):
            Appliance.from_kwh("iron", ApplianceKind.FLEXIBLE_UNINTERRUPTIBLE, "1.8", 2, {1, 2})

    def test_kind_from_string(self):
        appliance = Appliance.from_kwh("iron", "flexible_uninterruptible", "1.8", 7)
        assert appliance.kind is ApplianceKind.FLEXIBLE_UNINTERRUPTIBLE
        assert appliance.power_wh == 1800
        assert appliance.power_rating == Decimal("1.8")
        assert appliance.daily_energy_wh == 12600


class TestTariffDay:

    def test_from_cents(self, winter):
        assert winter.prices[7] == 20800
        assert winter.price_cents(7) == Decimal("20.8")
        assert winter.season is Season.WINTER
        assert winter.slots_in_band(Band.PEAK) == frozenset({7, 8, 9, 10, 18, 19})

    def test_needs_24_prices(self):
        with pytest.raises(InvalidInputError):
            TariffDay.from_cents([10] * 23, [Band.PEAK] * 23, Season.WINTER)

    def test_needs_24_bands(self):
        with pytest.raises(InvalidInputError):
            TariffDay.from_cents([10] * 24, [Band.PEAK] * 23, Season.WINTER)

    @pytest.mark.parametrize("price", [0, -5])
    def test_prices_positive(self, price):
        with pytest.raises(InvalidInputError):
            TariffDay.from_cents([price] + [10] * 23, [Band.PEAK] * 24, Season.WINTER)

    def test_prices_are_integer_millicents(self):
        with pytest.raises(InvalidInputError):
            TariffDay((10.5,) * 24, (Band.PEAK,) * 24, Season.WINTER)

    def test_flat(self):
        flat = TariffDay.flat(10)
        assert set(flat.prices) == {10000}
        assert flat.as_array().sum() == 240000


class TestHouseholdScenario:

    def test_duplicate_ids(self):
        lamp = Appliance.from_kwh("lamp", ApplianceKind.FIXED, "0.1", 1, {0})
        with pytest.raises(InvalidInputError):
            HouseholdScenario((lamp, lamp))

    def test_precedence_needs_uninterruptible(self):
        appliances = (
            Appliance.from_kwh("ac", ApplianceKind.FLEXIBLE_INTERRUPTIBLE, "1.44", 10),
            Appliance.from_kwh("iron", ApplianceKind.FLEXIBLE_UNINTERRUPTIBLE, "1.8", 7),
        )
        with pytest.raises(InvalidInputError):
            HouseholdScenario(appliances, (("ac", "iron"),))

    def test_precedence_unknown_id(self, laundry):
        with pytest.raises(InvalidInputError):
            HouseholdScenario(laundry.appliances, (("washing machine", "dryer"),))

    def test_precedence_cycle(self, laundry):
        with pytest.raises(InvalidInputError, match="cycle"):
            HouseholdScenario(laundry.appliances, (("washing machine", "iron"), ("iron", "washing machine")))

    def test_precedence_chain_must_fit(self):
        appliances = (
            Appliance.from_kwh("a", ApplianceKind.FLEXIBLE_UNINTERRUPTIBLE, "1", 13),
            Appliance.from_kwh("b", ApplianceKind.FLEXIBLE_UNINTERRUPTIBLE, "1", 13),
        )
        with pytest.raises(InvalidInputError):
            HouseholdScenario(appliances, (("a", "b"),))

    def test_default_baseline_is_earliest(self, laundry):
        assert laundry.baseline.active_slots("washing machine") == tuple(range(0, 8))
        assert laundry.baseline.active_slots("iron") == tuple(range(8, 15))

    def test_infeasible_baseline(self, laundry):
        baseline = laundry_schedule(range(3, 11), range(5, 12))
        with pytest.raises(InfeasibleSchedule):
            HouseholdScenario(laundry.appliances, laundry.precedence, baseline)

    def test_canonical_order(self, table1):
        assert table1.canonical_ids == tuple(sorted(a.id for a in table1.appliances))
        assert [a.id for a in table1.flexible] == ["air conditioner", "iron", "washing machine", "water heater"]


class TestTable1:

    def test_water_heater(self, table1):
        heater = table1.appliance("water heater")
        assert heater.power_rating == Decimal("4.45")
        assert heater.operating_slots == 8
        assert heater.kind is ApplianceKind.FLEXIBLE_INTERRUPTIBLE

    def test_ceiling_fan(self, table1):
        fan = table1.appliance("ceiling fan")
        assert fan.power_rating == Decimal("0.075")
        assert fan.operating_slots == 14
        assert fan.kind is ApplianceKind.FIXED

    def test_precedence(self, table1):
        assert table1.precedence == (("washing machine", "iron"),)

    def test_eight_appliances(self, table1):
        assert len(table1.appliances) == 8


class TestValidateSchedule:

    def test_table1_baseline_is_feasible(self, table1):
        assert validate_schedule(table1.baseline, table1) == []

    def test_contiguity(self, laundry):
        schedule = laundry_schedule({2, 3, 4, 5, 6, 7, 8, 10}, range(11, 18))
        violations = validate_schedule(schedule, laundry)
        assert len(violations) == 1
        assert violations[0].rule is ViolationRule.CONTIGUITY
        assert violations[0].appliance == "washing machine"
        assert violations[0].slots == (2, 3, 4, 5, 6, 7, 8, 10)

    def test_precedence(self, laundry):
        schedule = laundry_schedule(range(3, 11), range(5, 12))
        violations = validate_schedule(schedule, laundry)
        assert len(violations) == 1
        assert violations[0].rule is ViolationRule.PRECEDENCE
        assert violations[0].appliance == "iron"
        assert violations[0].slots == (5, 6, 7, 8, 9, 10)

    def test_cardinality(self, laundry):
        schedule = laundry_schedule(range(0, 7), range(10, 17))
        rules = [v.rule for v in validate_schedule(schedule, laundry)]
        assert rules == [ViolationRule.CARDINALITY]

    def test_missing_and_unknown(self, laundry):
        schedule = Schedule.from_slots({"washing machine": range(0, 8), "dryer": [1]})
        rules = [(v.appliance, v.rule) for v in validate_schedule(schedule, laundry)]
        assert rules == [("dryer", ViolationRule.UNKNOWN), ("iron", ViolationRule.MISSING)]

    def test_fixed_profile(self, small_mixed):
        slots = {"lamp": {17, 18, 19}, "dryer": {0, 1, 2}, "heater": {5, 9}}
        violations = validate_schedule(Schedule.from_slots(slots), small_mixed)
        assert [(v.rule, v.slots) for v in violations] == [(ViolationRule.FIXED_PROFILE, (17, 20))]

    def test_round_trip_keeps_feasibility(self, table1):
        again = Schedule(table1.baseline.to_dict())
        assert again == table1.baseline
        assert validate_schedule(again, table1) == []


class TestTotalCost:

    def test_empty_household(self, winter):
        empty = HouseholdScenario(())
        assert total_cost(empty.baseline, winter, empty).total == 0

    def test_water_heater_flat_tariff(self, water_heater_only):
        cost = total_cost(water_heater_only.baseline, TariffDay.flat(10), water_heater_only)
        assert cost.total == cents_to_units(356)
        assert cost.total_tenths == 3560

    def test_table1_winter_baseline(self, table1, winter):
        cost = total_cost(table1.baseline, winter, table1)
        assert cost.total == 994_967_000
        assert cost.total_tenths == 9947
        assert cost.total_tenths == sum(cost.hourly_tenths)

    def test_table1_summer_baseline(self, table1, summer):
        cost = total_cost(table1.baseline, summer, table1)
        assert cost.total == 905_245_500
        assert cost.total_tenths == 9049

    def test_infeasible_schedule_raises(self, laundry, winter):
        with pytest.raises(InfeasibleSchedule):
            total_cost(laundry_schedule(range(3, 11), range(5, 12)), winter, laundry)

    @pytest.mark.parametrize("factor", [2, 3, 10])
    def test_price_scaling_scales_cost(self, table1, winter, factor):
        scaled = TariffDay(tuple(factor * p for p in winter.prices), winter.bands, winter.season)
        assert total_cost(table1.baseline, scaled, table1).total == factor * total_cost(
            table1.baseline, winter, table1).total

    def test_breakdown_total_must_match(self):
        with pytest.raises(InvalidInputError):
            CostBreakdown((1,) * 24, 25)


class TestLoadAndEnergy:

    def test_load_conserves_energy(self, table1):
        assert sum(load_profile(table1.baseline, table1)) == sum(a.daily_energy_wh for a in table1.appliances)

    def test_peak_load(self, table1):
        assert peak_load(table1.baseline, table1) == (17, 10645)

    def test_energy_by_band(self, table1, winter):
        assert energy_by_band(table1.baseline, table1, winter) == {
            Band.OFF_PEAK: 18120,
            Band.MID_PEAK: 50025,
            Band.PEAK: 19565,
        }

    def test_cost_reduction(self):
        assert cost_reduction(200, 150) == Fraction(25)
        assert cost_reduction(200, 250) == Fraction(-25)

    def test_cost_reduction_of_free_reference_is_undefined(self):
        assert cost_reduction(0, 0) is None

    def test_cost_reduction_rejects_negative_reference(self):
        with pytest.raises(InvalidInputError):
            cost_reduction(-1, 10)
