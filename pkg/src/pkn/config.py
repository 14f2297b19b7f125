"""Engine configuration with layered sources: defaults < file < environment < flags."""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .fuzzy import QuantifierThresholds


@dataclass(frozen=True)
class StepWeights:
    """Default weight of each plausible step when no metadata overrides it."""

    specialization: float = 0.8
    generalization: float = 0.5
    similarity: float = 0.8
    implication_forward: float = 0.8
    implication_backward: float = 0.2
    analogy: float = 0.8


@dataclass(frozen=True)
class EngineConfig:
    few: float = 0.2
    many: float = 0.5
    most: float = 0.75
    alpha: float = 0.5
    window_fraction: float = 0.1
    ceiling: float = 120.0
    max_depth: int = 6
    min_certainty: float = 0.1
    undecided_band: float = 0.1
    candidate_cap: int = 1000
    functional: tuple = ()
    weights: StepWeights = field(default_factory=StepWeights)

    def __post_init__(self):
        for name in ("few", "many", "most", "alpha"):
            value = getattr(self, name)
            if not 0 < value <= 1:
                raise ValueError(f"{name} must lie in (0, 1], got {value}")
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        if not 0 <= self.min_certainty <= 1:
            raise ValueError("min_certainty must lie in [0, 1]")

    @property
    def thresholds(self) -> QuantifierThresholds:
        return QuantifierThresholds(self.few, self.many, self.most)

    def replace(self, **changes) -> "EngineConfig":
        return dataclasses.replace(self, **changes)

    @classmethod
    def load(cls, path: str | os.PathLike | None = None,
             env: Mapping[str, str] | None = None,
             overrides: Mapping[str, object] | None = None) -> "EngineConfig":
        """Merge a ``key=value`` file, ``PKN_*`` variables and explicit overrides."""
        values: dict = {}
        if path is not None:
            for key, raw in read_config_file(path).items():
                values[_normalize(key)] = raw
        env = os.environ if env is None else env
        for key, raw in env.items():
            if key.startswith("PKN_") and key != "PKN_CONFIG":
                values[_normalize(key[4:])] = raw
        for key, raw in (overrides or {}).items():
            if raw is not None:
                values[_normalize(key)] = raw
        return cls.from_mapping(values)

    @classmethod
    def from_mapping(cls, values: Mapping[str, object]) -> "EngineConfig":
        kwargs: dict = {}
        weights: dict = {}
        for raw_key, raw in values.items():
            key = _normalize(raw_key)
            if key.startswith("weight_"):
                wname = key[len("weight_"):]
                if wname not in _WEIGHT_FIELDS:
                    raise ValueError(f"unknown step weight {raw_key!r}")
                weights[wname] = float(raw)
            elif key == "functional":
                kwargs[key] = _as_tuple(raw)
            elif key in _INT_FIELDS:
                kwargs[key] = int(raw)
            elif key in _FLOAT_FIELDS:
                kwargs[key] = float(raw)
            else:
                raise ValueError(f"unknown configuration key {raw_key!r}")
        if weights:
            kwargs["weights"] = StepWeights(**weights)
        return cls(**kwargs)


def _normalize(key: str) -> str:
    key = key.strip().lower().replace("-", "_")
    return _ALIASES.get(key, key)


_ALIASES = {"depth": "max_depth", "crossfade": "window_fraction", "age_ceiling": "ceiling",
            "band": "undecided_band"}
_INT_FIELDS = {"max_depth", "candidate_cap"}
_FLOAT_FIELDS = {"few", "many", "most", "alpha", "window_fraction", "ceiling",
                 "min_certainty", "undecided_band"}
_WEIGHT_FIELDS = {f.name for f in dataclasses.fields(StepWeights)}


def _as_tuple(raw) -> tuple:
    if isinstance(raw, str):
        return tuple(x.strip() for x in raw.split(",") if x.strip())
    return tuple(raw)


def read_config_file(path) -> dict:
    out = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out
