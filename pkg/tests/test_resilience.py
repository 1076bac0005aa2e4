"""
Tests for the resilience index, clean-versus-attacked experiments and seed sweeps.
"""

from fractions import Fraction

import pytest

from hems_resilience.attacks import Delay, PeakLower, PeakShift, Scale, winter_peak_lower
from hems_resilience.core.errors import InvalidAttack, InvalidInputError, InvalidParameterError, UndefinedRI
from hems_resilience.core.model import CostBreakdown, total_cost
from hems_resilience.resilience import (
    BillingMode,
    Stats,
    hourly_resilience,
    mean_defined,
    parse_billing_mode,
    resilience_index,
    run_experiment,
    summarize,
    sweep_seeds,
    with_seed,
)
from hems_resilience.schedulers.dispatch import OptimizerKind
from hems_resilience.schedulers.ga import GAParams
from hems_resilience.schedulers.hsa import HSAParams
from hems_resilience.schedulers.instances import random_scenario, random_tariff
from hems_resilience.schedulers.rng import make_rng

SMALL_GA = GAParams(population_size=12, generations=30, seed=0)
SMALL_HSA = HSAParams(harmony_memory_size=10, max_improvisations=400, seed=0)


def random_attack(rng):
    """A Delay, PeakLower or PeakShift with random hours, slots and price."""
    shape = int(rng.integers(3))
    if shape == 0:
        return Delay(int(rng.integers(1, 24)))
    if shape == 1:
        slots = rng.choice(24, size=int(rng.integers(1, 7)), replace=False)
        return PeakLower(int(rng.integers(5, 26)), slots)
    half = int(rng.integers(1, 5))
    slots = rng.choice(24, size=2 * half, replace=False)
    return PeakShift(slots[:half], slots[half:])


class TestResilienceIndex:

    @pytest.mark.parametrize("attacked,clean,expected", [
        (100, 100, 100),
        (110, 100, 90),
        (90, 100, 90),
        (0, 100, 0),
        (200, 100, 0),
        (300, 100, -100),
        (Fraction(1018, 10), 100, Fraction(982, 10)),
    ])
    def test_values(self, attacked, clean, expected):
        assert resilience_index(attacked, clean) == expected

    def test_zero_clean_cost(self):
        with pytest.raises(UndefinedRI):
            resilience_index(10, 0)

    def test_negative_cost(self):
        with pytest.raises(InvalidInputError):
            resilience_index(-1, 10)

    def test_hourly_skips_zero_clean_hours(self):
        clean = CostBreakdown.from_hourly([0] * 23 + [100])
        attacked = CostBreakdown.from_hourly([50] + [0] * 22 + [150])
        hourly = hourly_resilience(attacked, clean)
        assert hourly[:23] == (None,) * 23
        assert hourly[23] == 50

    def test_mean_defined(self):
        assert mean_defined([None, Fraction(90), Fraction(100)]) == 95
        assert mean_defined([None, None]) is None


class TestBillingMode:

    def test_parse(self):
        assert parse_billing_mode("forged_tariff") is BillingMode.FORGED_TARIFF

    def test_unknown(self):
        with pytest.raises(InvalidParameterError, match="billing mode"):
            parse_billing_mode("average")


class TestRunExperiment:

    def test_no_attack_is_fully_resilient(self, laundry, winter):
        report = run_experiment(laundry, winter, [], "oracle")
        assert report.ri_total == 100
        assert report.attacked.schedule == report.clean.schedule
        assert report.attack_echo == ()

    @pytest.mark.parametrize("kind,household,params", [
        (OptimizerKind.GA, "table1", SMALL_GA),
        (OptimizerKind.HSA, "table1", SMALL_HSA),
        (OptimizerKind.ORACLE, "small_mixed", None),
        (OptimizerKind.BASELINE, "table1", None),
    ])
    @pytest.mark.parametrize("factor", [2, 3, 10])
    def test_scaling_keeps_bill(self, request, winter, kind, household, params, factor):
        scenario = request.getfixturevalue(household)
        report = run_experiment(scenario, winter, [Scale(factor)], kind, params)
        assert report.attacked.schedule == report.clean.schedule
        assert report.attacked.cost == report.clean.cost
        assert report.ri_total == 100
        assert all(ri in (None, 100) for ri in report.ri_hourly)

    def test_forged_billing_sees_scaled_bill(self, laundry, winter):
        report = run_experiment(laundry, winter, [Scale(2)], "oracle", billing_mode="forged_tariff")
        assert report.attacked.cost.total == 2 * report.clean.cost.total
        assert report.ri_total == 0
        assert report.billing_mode is BillingMode.FORGED_TARIFF

    @pytest.mark.parametrize("attack", [
        Delay(3),
        Delay(12),
        winter_peak_lower(),
        PeakShift({7, 8, 9, 10}, {0, 1, 2, 3}),
    ])
    def test_oracle_attacks_never_lower_bill(self, small_mixed, winter, attack):
        report = run_experiment(small_mixed, winter, [attack], OptimizerKind.ORACLE)
        assert report.attacked.cost.total >= report.clean.cost.total
        assert report.ri_total <= 100

    @pytest.mark.parametrize("case", range(20))
    def test_oracle_random_attacks_never_lower_bill(self, case):
        rng = make_rng(200 + case)
        scenario = random_scenario(rng, max_space=20_000)
        tariff = random_tariff(rng)
        attack = random_attack(rng)
        report = run_experiment(scenario, tariff, [attack], OptimizerKind.ORACLE)
        assert report.attacked.cost.total >= report.clean.cost.total
        assert report.ri_total <= 100

    def test_attacked_run_billed_on_true_tariff(self, laundry, winter):
        report = run_experiment(laundry, winter, [Delay(6)], "oracle")
        assert report.attacked.cost == total_cost(report.attacked.schedule, winter, laundry)
        assert report.forged_tariff.prices[6] == winter.prices[0]

    def test_attacked_history_in_forged_costs(self, laundry, winter):
        report = run_experiment(laundry, winter, [Delay(6)], "oracle")
        forged_bill = total_cost(report.attacked.schedule, report.forged_tariff, laundry)
        assert report.attacked.best_cost_history[-1] == forged_bill.total
        assert report.attacked.cost.total != forged_bill.total

    def test_hourly_index_undefined_where_clean_hour_is_free(self, laundry, winter):
        report = run_experiment(laundry, winter, [Delay(6)], "oracle")
        idle = [t for t, c in enumerate(report.clean.cost.hourly) if c == 0]
        assert idle
        assert all(report.ri_hourly[t] is None for t in idle)
        assert report.ri_mean_hourly == mean_defined(report.ri_hourly)

    def test_echoes(self, laundry, winter):
        report = run_experiment(laundry, winter, [Delay(2), Scale("1.5")], "ga", SMALL_GA)
        assert report.attack_echo == ("delay:2", "scale:1.5")
        assert report.optimizer == "GA"
        assert report.seed == 0
        assert report.params_echo["population_size"] == 12
        assert report.params_echo["billing_mode"] == "true_tariff"

    def test_oracle_echo_has_limit(self, laundry, winter):
        report = run_experiment(laundry, winter, [Delay(1)], "oracle", oracle_limit=5000)
        assert report.params_echo == {"optimizer": "Oracle", "billing_mode": "true_tariff", "oracle_limit": 5000}
        assert report.seed is None

    def test_peaks_reported(self, table1, winter):
        report = run_experiment(table1, winter, [], "baseline")
        assert report.clean_peak == report.attacked_peak == (17, 10645)

    def test_bad_attack(self, laundry, winter):
        with pytest.raises(InvalidAttack):
            run_experiment(laundry, winter, [Scale(Fraction(1, 10**6))], "oracle")

    def test_same_seed_same_report(self, table1, summer):
        first = run_experiment(table1, summer, [Delay(4)], "ga", SMALL_GA)
        second = run_experiment(table1, summer, [Delay(4)], "ga", SMALL_GA)
        assert first.attacked.schedule == second.attacked.schedule
        assert first.ri_total == second.ri_total


class TestWinterPeakLower:

    @pytest.mark.parametrize("kind", ["ga", "hsa"])
    @pytest.mark.parametrize("seed", range(10))
    def test_household_stays_resilient(self, table1, winter, kind, seed):
        report = run_experiment(table1, winter, [winter_peak_lower()], kind, with_seed(kind, None, seed))
        assert report.forged_tariff.prices[8] == 10100
        assert report.attacked.cost.total >= report.clean.cost.total
        assert report.ri_total > 90


class TestSweep:

    def test_with_seed(self):
        assert with_seed("ga", SMALL_GA, 5) == GAParams(population_size=12, generations=30, seed=5)
        assert with_seed("hsa", None, 2) == HSAParams(seed=2)
        assert with_seed("oracle", None, 2) is None

    def test_reports_in_seed_order(self, laundry, winter):
        result = sweep_seeds(laundry, winter, [Delay(3)], [4, 1, 4], "ga", SMALL_GA)
        assert [r.seed for r in result.reports] == [4, 1, 4]
        assert result.reports[0].ri_total == result.reports[2].ri_total
        assert result.summary.runs == 3

    def test_matches_single_runs(self, laundry, winter):
        result = sweep_seeds(laundry, winter, [Delay(3)], [7], "ga", SMALL_GA)
        single = run_experiment(laundry, winter, [Delay(3)], "ga", with_seed("ga", SMALL_GA, 7))
        assert result.reports[0].attacked.cost == single.attacked.cost

    def test_summary(self, laundry, winter):
        result = sweep_seeds(laundry, winter, [Delay(3)], [0, 1], "oracle")
        summary = result.summary
        totals = [r.ri_total for r in result.reports]
        assert summary.ri_total == Stats(sum(totals, Fraction(0)) / 2, min(totals), max(totals))
        assert summary.clean_total.minimum == summary.clean_total.maximum

    def test_empty_seeds(self, laundry, winter):
        with pytest.raises(InvalidParameterError):
            sweep_seeds(laundry, winter, [], [], "ga")

    def test_empty_summary(self):
        with pytest.raises(InvalidParameterError):
            summarize([])

    def test_stats_skip_undefined(self):
        assert Stats.of([None, 1, 3]) == Stats(Fraction(2), Fraction(1), Fraction(3))
        assert Stats.of([None]) is None
