"""Experiment configuration and its JSON form."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Optional

from ..environments import KINDS
from ..errors import ConfigError

ALGORITHMS = ("oppm", "optoppm", "optoppm_multi")
DEFAULT_LAGS = {"oppm": None, "optoppm": [4], "optoppm_multi": [4, 5, 6]}


@dataclass
class ExperimentConfig:
    """One (environment, algorithm) run.

    JSON config files use exactly these field names; command-line flags
    override values read from a file.
    """

    environment: str = "case1"
    algorithm: str = "oppm"
    rounds: int = 100_000
    seed: int = 0
    epsilon: float = 0.1
    C: float = 1.0
    C1: float = 1.0
    C2: float = 1.0
    lags: Optional[list] = None
    hedge_T_guess: Optional[int] = None
    record_stride: int = 100
    saddle: Optional[list] = None
    saddles: Optional[list] = None
    init: Optional[list] = None
    inner_tol: float = 1e-10
    name: Optional[str] = None
    out: Optional[str] = None

    def __post_init__(self):
        self.validate()

    @property
    def label(self) -> str:
        return self.name or f"{self.environment}_{self.algorithm}"

    @property
    def effective_lags(self) -> Optional[list]:
        return self.lags if self.lags is not None else DEFAULT_LAGS[self.algorithm]

    @property
    def effective_T_guess(self) -> Optional[int]:
        if self.algorithm != "optoppm_multi":
            return None
        if self.hedge_T_guess is not None:
            return self.hedge_T_guess
        return 2 * len(self.effective_lags) + 1

    def validate(self):
        if self.environment not in KINDS:
            raise ConfigError(f"environment must be one of {KINDS}, got {self.environment!r}")
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if not isinstance(self.rounds, int) or self.rounds < 1:
            raise ConfigError("rounds must be an integer >= 1")
        if not isinstance(self.record_stride, int) or self.record_stride < 1:
            raise ConfigError("record_stride must be an integer >= 1")
        for key in ("epsilon", "C", "C1", "C2", "inner_tol"):
            if not getattr(self, key) > 0:
                raise ConfigError(f"{key} must be positive")
        if self.lags is not None:
            if self.algorithm == "oppm":
                raise ConfigError("oppm takes no predictor lags")
            if not self.lags or any((not isinstance(k, int)) or k < 1 for k in self.lags):
                raise ConfigError("lags must be a non-empty list of integers >= 1")
            if self.algorithm == "optoppm" and len(self.lags) != 1:
                raise ConfigError("optoppm uses exactly one lag; use optoppm_multi for several")
        if self.hedge_T_guess is not None and self.algorithm == "optoppm_multi":
            if self.hedge_T_guess <= len(self.effective_lags):
                raise ConfigError("hedge_T_guess must exceed the number of predictors")
        if self.environment == "stationary" and self.saddle is None:
            raise ConfigError("stationary environment needs 'saddle'")
        if self.environment == "custom" and not self.saddles:
            raise ConfigError("custom environment needs 'saddles'")
        if self.init is not None and len(self.init) != 2:
            raise ConfigError("init must be [x0, y0]")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        try:
            return cls(**data)
        except TypeError as e:
            raise ConfigError(str(e)) from e

    @classmethod
    def from_file(cls, path, **overrides) -> "ExperimentConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return asdict(self)

    def replace(self, **changes) -> "ExperimentConfig":
        d = self.to_dict()
        d.update(changes)
        return ExperimentConfig.from_dict(d)
