"""
Tests for the batch command line: subcommands, artifacts and exit codes.
"""

import hashlib
import json

import pytest

from hems_resilience.cli import (
    EXIT_CONFIG,
    EXIT_INFEASIBLE,
    EXIT_OK,
    EXIT_SEARCH_SPACE,
    build_config,
    build_parser,
    main,
)
from hems_resilience.core.model import HouseholdScenario
from hems_resilience.core.scenario import scenario_to_dict, tariff_to_dict
from hems_resilience.reports import read_cost_csv

# cost_tou_winter_seed0.csv of the shipped household's baseline
BASELINE_WINTER_SHA256 = "6edbd23eed12b02c9e4eb020f0837693f24363ceec7518d25ba9416d79325d63"


@pytest.fixture
def experiment(laundry, winter, write_json):
    """Laundry household on the winter tariff with small GA and HSA runs."""
    write_json("laundry.json", scenario_to_dict(laundry))
    write_json("tou_winter.json", tariff_to_dict(winter))
    return write_json("experiment.json", {
        "scenario": "laundry.json",
        "tariffs": ["tou_winter.json"],
        "optimizers": ["ga", "hsa"],
        "ga": {"population_size": 12, "generations": 30},
        "hsa": {"harmony_memory_size": 10, "max_improvisations": 400},
        "seeds": [0],
    })


def run(*argv):
    return main([str(a) for a in argv])


class TestParser:

    def test_overrides(self, experiment, tmp_path):
        args = build_parser().parse_args([
            "attack", "--config", str(experiment), "--attack", "delay:3", "--attack", "scale:2",
            "--seed", "4", "--seed", "5", "--optimizer", "oracle", "--billing-mode", "forged_tariff",
            "--out-dir", str(tmp_path / "out"),
        ])
        config = build_config(args)
        assert len(config.attacks) == 2
        assert config.seeds == (4, 5)
        assert [o.value for o in config.optimizers] == ["oracle"]
        assert config.billing_mode.value == "forged_tariff"
        assert config.ga.population_size == 12

    def test_subcommand_required(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])


class TestValidate:

    def test_shipped_files(self, capsys):
        assert run("validate") == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 3
        assert all(line.startswith("ok ") for line in lines)

    def test_infeasible_baseline(self, laundry, write_json, capsys):
        document = scenario_to_dict(laundry)
        document["baseline"]["iron"] = [1 if 3 <= t < 10 else 0 for t in range(24)]
        path = write_json("bad.json", document)
        assert run("validate", "--scenario", path) == EXIT_INFEASIBLE
        assert "infeasible" in capsys.readouterr().err

    def test_parse_error(self, write_json, capsys):
        path = write_json("broken.json", '{"appliances": [}')
        assert run("validate", "--scenario", path) == EXIT_CONFIG
        assert f"{path}:1:" in capsys.readouterr().err

    def test_missing_file(self, tmp_path, capsys):
        assert run("validate", "--scenario", tmp_path / "absent.json") == EXIT_CONFIG
        assert "file not found" in capsys.readouterr().err


class TestOptimize:

    def test_artifacts(self, experiment, tmp_path, capsys):
        out = tmp_path / "out"
        assert run("optimize", "--config", experiment, "--out-dir", out) == EXIT_OK

        costs = read_cost_csv(out / "cost_tou_winter_seed0.csv")
        assert list(costs) == ["baseline_cost", "ga_cost", "hsa_cost"]
        assert (out / "load_tou_winter_seed0.csv").is_file()

        summary = json.loads((out / "optimize_summary.json").read_text(encoding="utf-8"))
        totals = {r["optimizer"]: r["total_cents"] for r in summary["runs"]}
        assert set(totals) == {"Baseline", "GA", "HSA"}
        assert totals["GA"] == f"{sum(costs['ga_cost']) / 10:.1f}"

        printed = capsys.readouterr().out
        assert printed.startswith("tou_winter seed=0 baseline=")
        assert "below baseline" in printed

    def test_cost_csv_header(self, experiment, tmp_path):
        out = tmp_path / "out"
        run("optimize", "--config", experiment, "--out-dir", out, "--optimizer", "ga")
        lines = (out / "cost_tou_winter_seed0.csv").read_text(encoding="utf-8").splitlines()
        assert lines[0] == "hour,baseline_cost,ga_cost"
        assert len(lines) == 25
        assert lines[1].startswith("0,")

    def test_byte_identical_reruns(self, experiment, tmp_path):
        first, second = tmp_path / "first", tmp_path / "second"
        assert run("optimize", "--config", experiment, "--out-dir", first) == EXIT_OK
        assert run("optimize", "--config", experiment, "--out-dir", second) == EXIT_OK
        names = sorted(p.name for p in first.iterdir())
        assert names == sorted(p.name for p in second.iterdir())
        for name in names:
            assert (first / name).read_bytes() == (second / name).read_bytes()

    def test_shipped_baseline_digest(self, tmp_path):
        assert run("optimize", "--optimizer", "baseline", "--out-dir", tmp_path) == EXIT_OK
        data = (tmp_path / "cost_tou_winter_seed0.csv").read_bytes()
        assert data.startswith(b"hour,baseline_cost\n0,0.6\n")
        assert hashlib.sha256(data).hexdigest() == BASELINE_WINTER_SHA256

    def test_household_without_appliances(self, write_json, tmp_path, capsys):
        path = write_json("empty.json", scenario_to_dict(HouseholdScenario((), name="empty")))
        out = tmp_path / "out"
        assert run("optimize", "--scenario", path, "--optimizer", "ga", "--out-dir", out) == EXIT_OK
        assert "ga=0.0 (reduction undefined)" in capsys.readouterr().out
        summary = json.loads((out / "optimize_summary.json").read_text(encoding="utf-8"))
        assert {r["reduction_vs_baseline_percent"] for r in summary["runs"]} == {"undefined"}

    def test_missing_tariff_file(self, tmp_path, capsys):
        code = run("optimize", "--optimizer", "oracle", "--tariff", tmp_path / "x.json", "--out-dir", tmp_path)
        assert code == EXIT_CONFIG
        assert "file not found" in capsys.readouterr().err


class TestAttack:

    def test_requires_attacks(self, experiment, tmp_path, capsys):
        assert run("attack", "--config", experiment, "--out-dir", tmp_path / "out") == EXIT_CONFIG
        assert "cmd_attack requires attacks; use cmd_optimize" in capsys.readouterr().err

    def test_bad_attack_text(self, experiment, tmp_path, capsys):
        code = run("attack", "--config", experiment, "--attack", "delay:1", "--attack", "boost:2")
        assert code == EXIT_CONFIG
        assert "attack #1" in capsys.readouterr().err

    def test_oracle_experiment(self, experiment, tmp_path, capsys):
        out = tmp_path / "out"
        code = run("attack", "--config", experiment, "--optimizer", "oracle",
                   "--attack", "lower:10.1@7-10,18-19", "--out-dir", out)
        assert code == EXIT_OK

        header = (out / "attack_cost_tou_winter_seed0.csv").read_text(encoding="utf-8").splitlines()[0]
        assert header == "hour,oracle_clean_cost,oracle_attacked_cost"
        ri_text = (out / "ri_tou_winter_seed0.csv").read_text(encoding="utf-8")
        assert ri_text.splitlines()[0] == "hour,oracle_ri"
        assert "undefined" in ri_text

        summary = json.loads((out / "attack_summary.json").read_text(encoding="utf-8"))
        entry = summary["tariffs"]["tou_winter"]["experiments"][0]
        assert entry["attacks"] == ["lower:10.1@7-10,18-19"]
        assert float(entry["ri_total_percent"]) <= 100
        assert summary["tariffs"]["tou_winter"]["sweeps"]["oracle"]["runs"] == 1

        printed = capsys.readouterr().out
        assert printed.startswith("tou_winter Oracle seed=0 C_O=")

    def test_seed_sweep(self, experiment, tmp_path):
        out = tmp_path / "out"
        code = run("attack", "--config", experiment, "--optimizer", "ga", "--attack", "delay:2",
                   "--seed", 0, "--seed", 1, "--out-dir", out)
        assert code == EXIT_OK
        assert (out / "ri_tou_winter_seed0.csv").is_file()
        assert (out / "ri_tou_winter_seed1.csv").is_file()
        summary = json.loads((out / "attack_summary.json").read_text(encoding="utf-8"))
        assert summary["tariffs"]["tou_winter"]["sweeps"]["ga"]["runs"] == 2


class TestOracle:

    def test_small_household(self, experiment, tmp_path, capsys):
        out = tmp_path / "out"
        assert run("oracle", "--config", experiment, "--out-dir", out) == EXIT_OK
        result = json.loads((out / "oracle_tou_winter.json").read_text(encoding="utf-8"))
        assert result["search_space_size"] == 17 * 18
        assert (out / "oracle_cost_tou_winter.csv").is_file()
        assert capsys.readouterr().out.startswith("tou_winter oracle=")

    def test_shipped_household_too_large(self, tmp_path, capsys):
        assert run("oracle", "--oracle-limit", 1000000, "--out-dir", tmp_path) == EXIT_SEARCH_SPACE
        assert "limit is 1000000" in capsys.readouterr().err
