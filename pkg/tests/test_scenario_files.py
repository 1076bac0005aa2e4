"""
Tests for scenario and tariff files: schema checks, line-anchored errors and
serialization back to the file schema.
"""

import json

import pytest

from hems_resilience.core.errors import InfeasibleSchedule, ScenarioFileError
from hems_resilience.core.model import Band, Season
from hems_resilience.core.scenario import (
    load_scenario,
    load_tariff,
    scenario_to_dict,
    tariff_to_dict,
)

TINY_SCENARIO = """{
  "name": "tiny",
  "appliances": [
    {"id": "lamp", "kind": "fixed", "power_rating": 0.1, "operating_slots": 2, "fixed_profile": [18, 19]},
    {"id": "kettle", "kind": "flexible_uninterruptible", "power_rating": 2, "operating_slots": 1%s}
  ]%s
}
"""


def tiny(kettle_extra="", tail=""):
    return TINY_SCENARIO % (kettle_extra, tail)


def tariff_document(**overrides):
    document = {
        "name": "test",
        "season": "winter",
        "prices": [10] * 24,
        "bands": ["off_peak"] * 24,
    }
    document.update(overrides)
    return document


class TestLoadScenario:

    def test_tiny(self, write_json):
        scenario = load_scenario(write_json("tiny.json", tiny()))
        assert scenario.name == "tiny"
        assert scenario.appliance("kettle").power_wh == 2000
        assert scenario.baseline.active_slots("kettle") == (0,)
        assert scenario.baseline.active_slots("lamp") == (18, 19)

    def test_unknown_appliance_key_names_line(self, write_json):
        path = write_json("tiny.json", tiny(', "colour": "red"'))
        with pytest.raises(ScenarioFileError) as excinfo:
            load_scenario(path)
        assert excinfo.value.line == 5
        assert str(excinfo.value).startswith(f"{path}:5:")
        assert "colour" in str(excinfo.value)

    def test_unknown_top_level_key(self, write_json):
        path = write_json("tiny.json", tiny(tail=',\n  "tarif": "winter"'))
        with pytest.raises(ScenarioFileError) as excinfo:
            load_scenario(path)
        assert excinfo.value.line == 7

    def test_invalid_kind(self, write_json):
        text = tiny().replace("flexible_uninterruptible", "sometimes")
        with pytest.raises(ScenarioFileError) as excinfo:
            load_scenario(write_json("tiny.json", text))
        assert excinfo.value.line == 5
        assert "kind must be one of" in excinfo.value.reason

    def test_non_positive_power(self, write_json):
        text = tiny().replace('"power_rating": 2,', '"power_rating": 0,')
        with pytest.raises(ScenarioFileError) as excinfo:
            load_scenario(write_json("tiny.json", text))
        assert excinfo.value.line == 5

    def test_duplicate_id(self, write_json):
        text = tiny().replace('"id": "kettle"', '"id": "lamp"')
        with pytest.raises(ScenarioFileError, match="duplicate appliance id 'lamp'"):
            load_scenario(write_json("tiny.json", text))

    @pytest.mark.parametrize("bad_id", ['["kettle"]', '{"name": "kettle"}', "7", '""'])
    def test_id_must_be_string(self, write_json, bad_id):
        text = tiny().replace('"id": "kettle"', f'"id": {bad_id}')
        with pytest.raises(ScenarioFileError, match="appliance #1 id must be a non-empty string") as excinfo:
            load_scenario(write_json("tiny.json", text))
        assert excinfo.value.line == 3

    def test_missing_required_key(self, write_json):
        text = tiny().replace('"operating_slots": 1', '"slots": 1')
        with pytest.raises(ScenarioFileError):
            load_scenario(write_json("tiny.json", text))

    def test_invalid_json(self, write_json):
        text = tiny().replace('"name": "tiny",', '"name": "tiny"')
        with pytest.raises(ScenarioFileError, match="invalid JSON") as excinfo:
            load_scenario(write_json("tiny.json", text))
        assert excinfo.value.line == 3

    def test_missing_file(self, tmp_path):
        with pytest.raises(ScenarioFileError, match="file not found") as excinfo:
            load_scenario(tmp_path / "absent.json")
        assert excinfo.value.line is None

    def test_bad_precedence(self, write_json):
        path = write_json("tiny.json", tiny(tail=',\n  "precedence": [["lamp", "kettle"]]'))
        with pytest.raises(ScenarioFileError, match="flexible uninterruptible") as excinfo:
            load_scenario(path)
        assert excinfo.value.line == 7

    def test_baseline_vector_length(self, write_json):
        tail = ',\n  "baseline": {\n    "kettle": [1, 0, 0]\n  }'
        with pytest.raises(ScenarioFileError) as excinfo:
            load_scenario(write_json("tiny.json", tiny(tail=tail)))
        assert excinfo.value.line == 8

    def test_infeasible_baseline(self, write_json):
        lamp = [0] * 24
        kettle = [0] * 24
        lamp[17] = lamp[18] = 1
        kettle[3] = 1
        tail = ',\n  "baseline": ' + json.dumps({"lamp": lamp, "kettle": kettle})
        path = write_json("tiny.json", tiny(tail=tail))
        with pytest.raises(InfeasibleSchedule) as excinfo:
            load_scenario(path)
        assert excinfo.value.location == f"{path}:7"
        assert [v.appliance for v in excinfo.value.violations] == ["lamp"]

    def test_round_trip(self, table1, write_json):
        again = load_scenario(write_json("table1.json", scenario_to_dict(table1)))
        assert again == table1


class TestLoadTariff:

    def test_shipped_winter(self, winter):
        assert winter.name == "tou-winter"
        assert winter.slots_in_band(Band.MID_PEAK) == frozenset(range(11, 18))

    def test_shipped_summer(self, summer):
        assert summer.season is Season.SUMMER
        assert max(summer.prices) == 13400

    def test_round_trip(self, winter, write_json):
        assert load_tariff(write_json("winter.json", tariff_to_dict(winter))) == winter

    def test_decimal_prices_stay_exact(self, write_json):
        tariff = load_tariff(write_json("t.json", tariff_document(prices=[10.1] * 24)))
        assert set(tariff.prices) == {10100}

    @pytest.mark.parametrize("overrides,reason", [
        (dict(prices=[10] * 23), "exactly 24 values"),
        (dict(bands=["off_peak"] * 25), "exactly 24 labels"),
        (dict(prices=[0] + [10] * 23), "must be positive"),
        (dict(prices=["cheap"] + [10] * 23), "must be a number"),
        (dict(bands=["shoulder"] + ["off_peak"] * 23), "band at slot 0"),
        (dict(season="autumn"), "season must be one of"),
        (dict(prices=[10.0001] * 24), "Tariff"),
        (dict(currency="USD"), "unknown key"),
    ])
    def test_invalid(self, write_json, overrides, reason):
        with pytest.raises(ScenarioFileError, match=reason):
            load_tariff(write_json("t.json", tariff_document(**overrides)))

    def test_price_error_names_prices_line(self, write_json):
        path = write_json("t.json", tariff_document(prices=[0] + [10] * 23))
        with pytest.raises(ScenarioFileError) as excinfo:
            load_tariff(path)
        text = path.read_text(encoding="utf-8")
        expected = text[:text.index('"prices"')].count("\n") + 1
        assert excinfo.value.line == expected

    def test_missing_season(self, write_json):
        document = tariff_document()
        del document["season"]
        with pytest.raises(ScenarioFileError, match="missing required key 'season'"):
            load_tariff(write_json("t.json", document))

    def test_top_level_array(self, write_json):
        with pytest.raises(ScenarioFileError, match="JSON object"):
            load_tariff(write_json("t.json", "[1, 2, 3]"))
