"""Run configuration: defaults < JSON config file < command-line flags."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from .atomic import ALPHA, DensityProfile, UnitSystem, read_profile_csv
from .cutoff import DEFAULT_GRID, log_grid
from .errors import ConfigError, DomainError, IoError
from .quadrature import DEFAULT_OSCILLATORY_REL, DEFAULT_SMOOTH_REL

CONFIG_ENV = "EDREP_CONFIG"


@dataclass(frozen=True)
class RunConfig:
    alpha: float = ALPHA
    profile: str = "hydrogen"
    width: float = 1.0
    profile_path: str | None = None
    k_min: float = DEFAULT_GRID[0]
    k_max: float = DEFAULT_GRID[1]
    count: int = DEFAULT_GRID[2]
    spacing: str = "log"
    smooth_rel: float = DEFAULT_SMOOTH_REL
    oscillatory_rel: float = DEFAULT_OSCILLATORY_REL
    csv_path: str | None = None
    json_path: str | None = None

    def validate(self) -> "RunConfig":
        if not 0 < self.alpha < 1:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.profile not in ("hydrogen", "gaussian", "file"):
            raise ConfigError(f"unknown profile {self.profile!r}")
        if self.profile == "gaussian" and not self.width > 0:
            raise ConfigError("gaussian width must be positive")
        if self.profile == "file" and not self.profile_path:
            raise ConfigError("profile 'file' needs profile_path")
        if not 0 < self.k_min < self.k_max:
            raise ConfigError("need 0 < k_min < k_max")
        if int(self.count) != self.count or self.count < 2:
            raise ConfigError("count must be an integer >= 2")
        if self.spacing not in ("log", "linear"):
            raise ConfigError(f"unknown spacing {self.spacing!r}")
        if not (self.smooth_rel > 0 and self.oscillatory_rel > 0):
            raise ConfigError("tolerances must be positive")
        return self

    @property
    def units(self) -> UnitSystem:
        return UnitSystem(self.alpha)

    def density_profile(self) -> DensityProfile:
        try:
            if self.profile == "hydrogen":
                return DensityProfile.hydrogen_1s()
            if self.profile == "gaussian":
                return DensityProfile.gaussian(self.width)
            return read_profile_csv(Path(self.profile_path))
        except DomainError as exc:
            raise ConfigError(str(exc)) from exc

    def grid(self):
        return log_grid(self.k_min, self.k_max, int(self.count), self.spacing)

    def to_dict(self) -> dict:
        return asdict(self)


def load_config_file(path) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return data


def resolve_config(config_path: str | None = None, overrides: dict | None = None) -> RunConfig:
    """Merge defaults, the config file (explicit path or $EDREP_CONFIG) and flag overrides."""
    cfg = RunConfig()
    path = config_path or os.environ.get(CONFIG_ENV)
    if path:
        cfg = replace(cfg, **load_config_file(path))
    if overrides:
        cfg = replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
    return cfg.validate()
