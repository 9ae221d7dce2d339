"""Run configuration: flat key=value files overridden by command-line flags."""
import logging
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Literal, Optional, Union

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from pdcsim.dynamics.lossless import CLASSICAL_VACUUM_OFFSET
from pdcsim.dynamics.params import LossyParams, SteadyParams
from pdcsim.errors import ConfigError
from pdcsim.gaussian.modes import StatKind
from pdcsim.gaussian.wick import DEFAULT_MAX_FACTORS
from pdcsim.oracles.monte_carlo import U64_MAX

logger = logging.getLogger(__name__)


class Scenario(str, Enum):
    STEADY = "steady"
    LOSSY = "lossy"
    CORRELATORS = "correlators"
    THRESHOLD = "threshold"
    SELFCHECK = "selfcheck"


class RunConfig(BaseModel):
    """Every knob of a CLI run; keys match the config file and the flags."""
    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    scenario: Scenario = Scenario.STEADY

    # steady / correlators grid
    sweep_axis: Literal["r", "n0"] = "r"
    r_min: float = Field(default=0.0, ge=0.0)
    r_max: float = Field(default=4.0, ge=0.0)
    r_points: int = Field(default=81, ge=1)
    r: float = Field(default=1.0, ge=0.0)
    n0: float = Field(default=0.3, ge=0.0)
    n0_classical: Optional[float] = Field(default=None, ge=0.0)

    # threshold grid, and steady with sweep_axis=n0
    n0_min: float = Field(default=0.0, ge=0.0)
    n0_max: float = Field(default=2.0, ge=0.0)
    n0_points: int = Field(default=41, ge=1)

    # cavity
    kappa0: float = Field(default=1.0, ge=0.0)
    decay_rate: float = Field(default=0.1, ge=0.0, alias="Lambda")
    loss_rate: float = Field(default=0.1, ge=0.0, alias="lambda")
    t_max: float = Field(default=50.0, gt=0.0)
    dt: float = Field(default=0.01, gt=0.0)
    t_stride: int = Field(default=10, ge=1)

    order_max: int = Field(default=6, ge=1, le=DEFAULT_MAX_FACTORS // 2)
    samples: int = Field(default=100_000, ge=1)
    seed: int = Field(default=20240101, ge=0, le=U64_MAX)

    out: Optional[str] = None
    context_out: Optional[str] = None
    plot: bool = False
    workers: int = Field(default=1, ge=1)
    self_test: bool = True

    @model_validator(mode="after")
    def check_ranges(self) -> "RunConfig":
        if self.r_min > self.r_max:
            raise ValueError(f"r_min ({self.r_min}) must not exceed r_max ({self.r_max})")
        if self.n0_min > self.n0_max:
            raise ValueError(f"n0_min ({self.n0_min}) must not exceed n0_max ({self.n0_max})")
        if self.dt > self.t_max:
            raise ValueError(f"dt ({self.dt}) must not exceed t_max ({self.t_max})")
        if self.scenario == Scenario.CORRELATORS and self.n0_classical is not None:
            raise ValueError("n0_classical does not apply to the correlators scenario, which uses n0 + 1/2")
        return self

    @property
    def classical_occupation(self) -> float:
        """n0_classical, defaulting to n0 + 1/2."""
        if self.n0_classical is not None:
            return self.n0_classical
        return self.n0 + CLASSICAL_VACUUM_OFFSET

    def steady_params(self, r: Optional[float] = None, n0: Optional[float] = None) -> SteadyParams:
        return SteadyParams(r=self.r if r is None else r, n0=self.n0 if n0 is None else n0)

    def lossy_params(self, stat: StatKind) -> LossyParams:
        n0 = self.n0 if stat == StatKind.QUANTUM else self.classical_occupation
        return LossyParams(kappa0=self.kappa0, decay_rate=self.decay_rate, loss_rate=self.loss_rate,
                           n0=n0, t_max=self.t_max, dt=self.dt, stat=stat)

    def resolved(self) -> Dict[str, Any]:
        """Effective configuration keyed like the config file, defaults filled in."""
        values = self.model_dump(by_alias=True, mode="json")
        values["n0_classical"] = self.classical_occupation
        return values


def config_keys() -> Dict[str, str]:
    """Config-file key -> model field name."""
    return {(info.alias or name): name for name, info in RunConfig.model_fields.items()}


def _scan_lines(path: Path) -> Dict[str, int]:
    """Line number of every key in a config file; rejects malformed and unknown lines."""
    known = config_keys()
    lines: Dict[str, int] = {}
    for number, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("export "):
            line = line[len("export "):].lstrip()
        if "=" not in line:
            raise ConfigError(f"expected key=value, got {raw.strip()!r}", line=number, source=str(path))
        key = line.split("=", 1)[0].strip()
        if key not in known:
            raise ConfigError(f"unknown key {key!r}", line=number, source=str(path))
        lines[key] = number
    return lines


def load_config(path: Optional[Union[str, Path]] = None,
                overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """Build a RunConfig from an optional key=value file plus overrides (flags win)."""
    values: Dict[str, Any] = {}
    lines: Dict[str, int] = {}
    source = None

    if path is not None:
        source = Path(path)
        if not source.is_file():
            raise ConfigError(f"config file not found: {source}")
        lines = _scan_lines(source)
        values.update({key: value for key, value in dotenv_values(source).items() if value is not None})
        logger.debug("📄 Loaded %d keys from %s", len(values), source)

    known = config_keys()
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in known:
            raise ConfigError(f"unknown key {key!r}")
        values[key] = value
        lines.pop(key, None)

    aliases = {name: alias for alias, name in known.items()}
    try:
        return RunConfig.model_validate(values)
    except ValidationError as e:
        error = e.errors()[0]
        key = str(error["loc"][0]) if error["loc"] else None
        key = aliases.get(key, key)
        where = f"{key}: " if key else ""
        raise ConfigError(f"{where}{error['msg']}", line=lines.get(key),
                          source=str(source) if key in lines else None) from e

