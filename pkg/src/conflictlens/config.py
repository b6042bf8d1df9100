"""
Run configuration (single source of truth).

Policy:
- Defaults come from config/conflictlens.toml, then the environment, then CLI flags
- .env is loaded ONCE at boot
- load_settings() is the only function that reads os.environ
- RunConfig is frozen after construction; engine code only sees AnalysisLimits
"""

from __future__ import annotations

import os
import sys
import tomllib
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Literal, Mapping, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import ConfigurationError

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parents[2] / "config" / "conflictlens.toml"


@dataclass(frozen=True)
class AnalysisLimits:
    """Enumeration bounds and solver knobs handed to the engine."""

    strategy_bound: int = 100000
    evidence_bound: int = 16
    class_bound: int = 4096
    jobs: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.strategy_bound < 1:
            raise ValueError("strategy_bound must be >= 1")
        if self.evidence_bound < 0:
            raise ValueError("evidence_bound must be >= 0")
        if self.class_bound < 1:
            raise ValueError("class_bound must be >= 1")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be >= 0")


class RunConfig(BaseModel):
    """Immutable config for one CLI invocation. Built once at boot."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    mode: Literal["analyze", "resolve", "explain", "solve"] = "resolve"
    horizon: Optional[int] = Field(default=None, ge=1)
    max_level: Literal["C1", "C2", "C3", "C4"] = "C4"
    output: Literal["text", "json"] = "text"
    seed: int = Field(default=0, ge=0)
    jobs: int = Field(default=1, ge=1)
    strategy_bound: int = Field(default=100000, gt=0)
    evidence_bound: int = Field(default=16, ge=0)
    class_bound: int = Field(default=4096, gt=0)
    log_level: str = "WARNING"

    def limits(self) -> AnalysisLimits:
        return AnalysisLimits(
            strategy_bound=self.strategy_bound,
            evidence_bound=self.evidence_bound,
            class_bound=self.class_bound,
            jobs=self.jobs,
            seed=self.seed,
        )


def _read_toml(path: Path) -> Dict[str, Any]:
    """Flatten the [analysis], [solver] and [telemetry] tables into RunConfig fields."""
    if not path.is_file():
        return {}
    with path.open("rb") as fh:
        raw = tomllib.load(fh)
    flat: Dict[str, Any] = {}
    for section in ("analysis", "solver"):
        flat.update(raw.get(section, {}))
    telemetry = raw.get("telemetry", {})
    if "log_level" in telemetry:
        flat["log_level"] = telemetry["log_level"]
    return flat


def load_settings(overrides: Optional[Mapping[str, Any]] = None) -> RunConfig:
    """
    THE ONLY FUNCTION THAT READS THE PROCESS ENVIRONMENT.

    Precedence: ``overrides`` (CLI flags, None values ignored) > environment
    > TOML file > built-in defaults. Raises ConfigurationError on invalid values.
    """
    load_dotenv()
    path = Path(os.environ.get("CONFLICTLENS_CONFIG", "") or DEFAULT_CONFIG_PATH)
    try:
        values = _read_toml(path)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigurationError(f"cannot read {path}: {exc}") from exc
    env_level = os.environ.get("CONFLICTLENS_LOG", "").strip()
    if env_level:
        values["log_level"] = env_level
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        return RunConfig(**values)
    except ValidationError as exc:
        raise ConfigurationError(f"invalid configuration: {exc.errors()[0]['msg']}") from exc


def load_config_or_exit(overrides: Optional[Mapping[str, Any]] = None) -> RunConfig:
    """load_settings() for entry points: prints FATAL and exits 3 on bad configuration."""
    try:
        return load_settings(overrides)
    except ConfigurationError as exc:
        print(f"FATAL: {exc}", file=sys.stderr)
        sys.exit(3)
