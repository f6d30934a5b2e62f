"""Configuration loading and validation."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any

import yaml

from nama.errors import DomainError


class Command(str, Enum):
    MATCH = "match"
    SOLVE = "solve"
    VERIFY = "verify"
    EXPAND = "expand"
    SCALES = "scales"
    SPECFUN = "specfun"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


# Keys accepted in nama.yml; everything else is ignored with a warning
FILE_KEYS = (
    "n",
    "d1",
    "d2",
    "tol",
    "t_min",
    "grid_size",
    "format",
    "order",
    "x1",
    "t_start",
    "bracket",
    "ray_t",
)


@dataclass
class RunConfig:
    command: Command = Command.MATCH
    n: int = 3
    d1: int = 1
    d2: int = 1
    tol: float = 1e-9
    t_min: float = 1e-3
    grid_size: int = 200
    out_path: str | None = None  # None or "-" writes to stdout
    format: OutputFormat = OutputFormat.CSV
    order: int = 4  # boundary-expansion order for `expand`
    x1: float = 1000.0
    t_start: float = 1e-4
    bracket: tuple[float, float] = (0.2, 5.0)
    ray_t: float = 1.0
    function: str | None = None
    args: list[str] = field(default_factory=list)

    def validate(self) -> None:
        """Raise DomainError for values no command can run with."""
        if self.n < 2:
            raise DomainError(f"n must be at least 2, got n={self.n}")
        if self.d1 < 1 or self.d2 < 1:
            raise DomainError(f"divisor degrees must be positive (d1={self.d1}, d2={self.d2})")
        if not self.tol > 0:
            raise DomainError(f"tol must be positive, got tol={self.tol}")
        if not 0 < self.t_min < 1:
            raise DomainError(f"t_min must lie in (0, 1), got t_min={self.t_min}")
        if self.grid_size < 2:
            raise DomainError(f"grid_size must be at least 2, got grid_size={self.grid_size}")
        if self.order < 0:
            raise DomainError(f"order must be non-negative, got order={self.order}")
        if not self.x1 > 0:
            raise DomainError(f"x1 must be positive, got x1={self.x1}")
        if not 0 < self.t_start < 1:
            raise DomainError(f"t_start must lie in (0, 1), got t_start={self.t_start}")
        lo, hi = self.bracket
        if not 0 < lo < hi:
            raise DomainError(f"bracket must satisfy 0 < lo < hi, got {self.bracket}")
        if not self.ray_t > 0:
            raise DomainError(f"ray_t must be positive, got ray_t={self.ray_t}")
        if self.command == Command.SPECFUN and not self.function:
            raise DomainError("specfun needs a function name")

    def to_dict(self) -> dict[str, Any]:
        """Echo of the settings that determine the output."""
        d: dict[str, Any] = {
            "command": self.command.value,
            "n": self.n,
            "d1": self.d1,
            "d2": self.d2,
            "tol": self.tol,
            "t_min": self.t_min,
            "grid_size": self.grid_size,
            "format": self.format.value,
            "order": self.order,
            "x1": self.x1,
            "t_start": self.t_start,
            "bracket": list(self.bracket),
            "ray_t": self.ray_t,
        }
        if self.command == Command.SPECFUN:
            d["function"] = self.function
            d["args"] = list(self.args)
        return d


def load_config(config_path: str | Path | None = None) -> RunConfig:
    """Load defaults from nama.yml, falling back to built-in defaults."""
    if config_path is None:
        config_path = Path("nama.yml")
    else:
        config_path = Path(config_path)

    if not config_path.exists():
        return RunConfig()

    with open(config_path) as f:
        raw = yaml.safe_load(f) or {}

    if not isinstance(raw, dict):
        raise DomainError(f"{config_path} must contain a mapping of settings")

    for key in raw:
        if key not in FILE_KEYS:
            warnings.warn(
                f"Unknown config key '{key}' in {config_path} is ignored.",
                stacklevel=2,
            )

    defaults = RunConfig()
    try:
        fmt = OutputFormat(raw.get("format", defaults.format.value))
    except ValueError as e:
        raise DomainError(f"format must be csv or json, got {raw['format']!r}") from e

    def setting(key: str, kind: type):
        value = raw.get(key, getattr(defaults, key))
        try:
            return kind(value)
        except (TypeError, ValueError) as e:
            raise DomainError(
                f"{key} in {config_path} must be {kind.__name__}, got {value!r}"
            ) from e

    bracket = raw.get("bracket", list(defaults.bracket))
    if not isinstance(bracket, list | tuple) or len(bracket) != 2:
        raise DomainError(f"bracket must be two numbers, got {bracket!r}")
    try:
        bracket = (float(bracket[0]), float(bracket[1]))
    except (TypeError, ValueError) as e:
        raise DomainError(f"bracket must be two numbers, got {bracket!r}") from e

    config = RunConfig(
        n=setting("n", int),
        d1=setting("d1", int),
        d2=setting("d2", int),
        tol=setting("tol", float),
        t_min=setting("t_min", float),
        grid_size=setting("grid_size", int),
        format=fmt,
        order=setting("order", int),
        x1=setting("x1", float),
        t_start=setting("t_start", float),
        bracket=bracket,
        ray_t=setting("ray_t", float),
    )
    config.validate()
    return config
