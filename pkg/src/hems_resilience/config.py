"""
Experiment configuration files.

An experiment file is a JSON object naming the scenario and tariff files, the
optimizers and their parameters, the attacks, billing mode and seeds. Paths are
resolved against the directory of the experiment file. Unknown keys are errors.

Example::

    {
      "scenario": "table1_scenario.json",
      "tariffs": ["tou_winter.json"],
      "optimizers": ["ga", "hsa"],
      "ga": {"population_size": 32, "generations": 200},
      "attacks": ["lower:10.1@7-10,18-19"],
      "billing_mode": "true_tariff",
      "seeds": [0, 1, 2],
      "output_dir": "results"
    }
"""

import logging
from dataclasses import dataclass, field, fields
from decimal import Decimal
from pathlib import Path

from .attacks import BandThresholds, parse_attack
from .core.errors import ConfigError, InvalidAttack, InvalidParameterError
from .core.scenario import TABLE1_SCENARIO_FILE, TARIFF_FILES, key_pattern, locate, read_json
from .core.model import Season
from .resilience import BillingMode, parse_billing_mode
from .schedulers.dispatch import OptimizerKind, parse_optimizer
from .schedulers.ga import GAParams
from .schedulers.hsa import HSAParams
from .schedulers.oracle import DEFAULT_ORACLE_LIMIT
from .schedulers.rng import check_seed

logger = logging.getLogger(__name__)

EXPERIMENT_KEYS = {
    "name", "note", "scenario", "tariffs", "optimizers", "ga", "hsa", "attacks", "billing_mode",
    "band_thresholds", "seeds", "output_dir", "oracle_limit", "n_jobs",
}
BAND_THRESHOLD_KEYS = {"mid_peak", "peak"}

DEFAULT_TARIFF_FILES = (TARIFF_FILES[Season.SUMMER], TARIFF_FILES[Season.WINTER])
DEFAULT_OPTIMIZERS = (OptimizerKind.GA, OptimizerKind.HSA)


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Everything one CLI run needs.

    Attributes:
        scenario: Scenario file.
        tariffs: Tariff files; each is optimized (and attacked) separately.
        optimizers: Optimizers to run, in report order.
        ga: GA settings (the seed is taken from ``seeds``).
        hsa: HSA settings (the seed is taken from ``seeds``).
        attacks: Attacks composed left to right.
        billing_mode: Tariff attacked schedules are billed on.
        band_thresholds: Optional band relabelling of forged tariffs.
        seeds: Seeds; every optimizer runs once per seed.
        output_dir: Directory artifacts are written to.
        oracle_limit: Maximum candidates the oracle may enumerate.
        n_jobs: joblib workers for seed sweeps.
        name: Experiment label.
    """
    scenario: Path = TABLE1_SCENARIO_FILE
    tariffs: tuple[Path, ...] = DEFAULT_TARIFF_FILES
    optimizers: tuple[OptimizerKind, ...] = DEFAULT_OPTIMIZERS
    ga: GAParams = field(default_factory=GAParams)
    hsa: HSAParams = field(default_factory=HSAParams)
    attacks: tuple = ()
    billing_mode: BillingMode = BillingMode.TRUE_TARIFF
    band_thresholds: BandThresholds | None = None
    seeds: tuple[int, ...] = (0,)
    output_dir: Path = Path("results")
    oracle_limit: int = DEFAULT_ORACLE_LIMIT
    n_jobs: int = 1
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "scenario", Path(self.scenario))
        object.__setattr__(self, "tariffs", tuple(Path(t) for t in self.tariffs))
        object.__setattr__(self, "optimizers", tuple(parse_optimizer(o) for o in self.optimizers))
        object.__setattr__(self, "attacks", tuple(self.attacks))
        object.__setattr__(self, "billing_mode", parse_billing_mode(self.billing_mode))
        object.__setattr__(self, "seeds", tuple(self.seeds))
        object.__setattr__(self, "output_dir", Path(self.output_dir))
        self.validate()

    def validate(self) -> None:
        """
        Check the configuration.

        Raises:
            ConfigError: If a value is out of range or a referenced file is missing.
        """
        if not self.tariffs:
            raise ConfigError("At least one tariff file is required")
        if not self.optimizers:
            raise ConfigError("At least one optimizer is required")
        if len(set(self.optimizers)) != len(self.optimizers):
            raise ConfigError(f"Optimizers are listed more than once: {[o.value for o in self.optimizers]}")
        if not self.seeds:
            raise ConfigError("At least one seed is required")
        for seed in self.seeds:
            try:
                check_seed(seed)
            except InvalidParameterError as e:
                raise ConfigError(str(e))
        for name in ("oracle_limit", "n_jobs"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigError(f"{name} must be a positive integer, got {value!r}")
        for path in (self.scenario, *self.tariffs):
            if not path.is_file():
                raise ConfigError(f"{path}: file not found")


def _plain(value):
    """JSON decimals become floats for parameter dataclasses."""
    return float(value) if isinstance(value, Decimal) else value


def _params(cls, section, path, text: str, key: str):
    line = locate(text, key_pattern(key))
    if not isinstance(section, dict):
        raise ConfigError(f"{path}:{line}: '{key}' must be an object")
    allowed = {f.name for f in fields(cls)} - {"seed"}
    unknown = sorted(set(section) - allowed)
    if unknown:
        hint = "; seeds come from 'seeds'" if "seed" in unknown else ""
        raise ConfigError(f"{path}:{line}: unknown {key} parameter(s) {unknown}; allowed: {sorted(allowed)}{hint}")
    try:
        return cls(**{k: _plain(v) for k, v in section.items()})
    except InvalidParameterError as e:
        raise ConfigError(f"{path}:{line}: {e}")


def _resolve(base: Path, value, path, text: str, key: str) -> Path:
    if not isinstance(value, str) or not value:
        raise ConfigError(f"{path}:{locate(text, key_pattern(key))}: '{key}' must hold file paths")
    candidate = Path(value)
    return candidate if candidate.is_absolute() else base / candidate


def load_experiment_config(path) -> ExperimentConfig:
    """
    Load and validate an experiment file.

    Args:
        path: Path to an experiment JSON file.

    Returns:
        ExperimentConfig: The validated configuration.

    Raises:
        ScenarioFileError: If the file is missing or not valid JSON.
        ConfigError: If a key is unknown or a value is invalid.
        InvalidAttack: If an attack cannot be parsed (``index`` names it).
    """
    path = Path(path)
    data, text = read_json(path)
    base = path.resolve().parent

    unknown = sorted(set(data) - EXPERIMENT_KEYS)
    if unknown:
        line = locate(text, key_pattern(unknown[0]))
        raise ConfigError(f"{path}:{line}: unknown key(s) {unknown}; allowed: {sorted(EXPERIMENT_KEYS)}")

    values = {}
    if "name" in data:
        values["name"] = str(data["name"])
    if "scenario" in data:
        values["scenario"] = _resolve(base, data["scenario"], path, text, "scenario")
    if "tariffs" in data:
        tariffs = data["tariffs"]
        if not isinstance(tariffs, list):
            raise ConfigError(f"{path}:{locate(text, key_pattern('tariffs'))}: 'tariffs' must be a list")
        values["tariffs"] = tuple(_resolve(base, t, path, text, "tariffs") for t in tariffs)
    if "optimizers" in data:
        line = locate(text, key_pattern("optimizers"))
        if not isinstance(data["optimizers"], list):
            raise ConfigError(f"{path}:{line}: 'optimizers' must be a list")
        try:
            values["optimizers"] = tuple(parse_optimizer(o) for o in data["optimizers"])
        except InvalidParameterError as e:
            raise ConfigError(f"{path}:{line}: {e}")
    if "ga" in data:
        values["ga"] = _params(GAParams, data["ga"], path, text, "ga")
    if "hsa" in data:
        values["hsa"] = _params(HSAParams, data["hsa"], path, text, "hsa")
    if "attacks" in data:
        if not isinstance(data["attacks"], list):
            raise ConfigError(f"{path}:{locate(text, key_pattern('attacks'))}: 'attacks' must be a list")
        attacks = []
        for index, entry in enumerate(data["attacks"]):
            if not isinstance(entry, str):
                raise InvalidAttack(f"expected text such as 'scale:1.5', got {entry!r}", index)
            try:
                attacks.append(parse_attack(entry))
            except InvalidAttack as e:
                raise InvalidAttack(e.reason, index)
        values["attacks"] = tuple(attacks)
    if "billing_mode" in data:
        try:
            values["billing_mode"] = parse_billing_mode(data["billing_mode"])
        except InvalidParameterError as e:
            raise ConfigError(f"{path}:{locate(text, key_pattern('billing_mode'))}: {e}")
    if "band_thresholds" in data:
        section = data["band_thresholds"]
        line = locate(text, key_pattern("band_thresholds"))
        if not isinstance(section, dict) or set(section) != BAND_THRESHOLD_KEYS:
            raise ConfigError(f"{path}:{line}: 'band_thresholds' needs exactly {sorted(BAND_THRESHOLD_KEYS)}")
        try:
            values["band_thresholds"] = BandThresholds(section["mid_peak"], section["peak"])
        except InvalidAttack as e:
            raise ConfigError(f"{path}:{line}: {e}")
    if "seeds" in data:
        if not isinstance(data["seeds"], list):
            raise ConfigError(f"{path}:{locate(text, key_pattern('seeds'))}: 'seeds' must be a list")
        values["seeds"] = tuple(data["seeds"])
    if "output_dir" in data:
        values["output_dir"] = _resolve(base, data["output_dir"], path, text, "output_dir")
    for key in ("oracle_limit", "n_jobs"):
        if key in data:
            values[key] = data[key]

    config = ExperimentConfig(**values)
    logger.debug("Loaded experiment config %s", path)
    return config
