"""Run configuration: one JSON document, every field optional."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .kinematics import SamplingConfig
from .metrics import DEFAULT_K, DEFAULT_MISS_THRESHOLD
from .predictor import PredictorConfig

_TOP_KEYS = {"map", "output", "master_seed", "num_samples", "sampling", "predictor", "metrics"}


@dataclass
class RunConfig:
    map: str | None = None
    output: str | None = None
    master_seed: int = 0
    num_samples: int = 1000
    sampling: SamplingConfig = field(default_factory=SamplingConfig)
    predictor: PredictorConfig | None = None
    k: int = DEFAULT_K
    miss_threshold: float = DEFAULT_MISS_THRESHOLD
    miss_threshold_is_default: bool = True

    def __post_init__(self):
        if not isinstance(self.master_seed, int) or not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be an unsigned 64-bit integer")
        if self.num_samples < 0:
            raise ValueError("num_samples must be non-negative")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.miss_threshold < 0:
            raise ValueError("miss_threshold must be non-negative")
        if self.predictor is None:
            self.predictor = self.default_predictor()

    def default_predictor(self, **overrides) -> PredictorConfig:
        s = self.sampling
        params = dict(k=self.k, horizon=s.future_horizon, dt=s.dt,
                      max_dist=s.effective_max_dist(), path_cap=s.path_cap)
        params.update(overrides)
        return PredictorConfig(**params)

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        if not isinstance(doc, dict):
            raise ValueError("config must be a JSON object")
        unknown = set(doc) - _TOP_KEYS
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        metrics = dict(doc.get("metrics", {}))
        bad = set(metrics) - {"k", "miss_threshold"}
        if bad:
            raise ValueError(f"unknown metrics keys: {sorted(bad)}")
        cfg = cls(
            map=doc.get("map"),
            output=doc.get("output"),
            master_seed=doc.get("master_seed", 0),
            num_samples=doc.get("num_samples", 1000),
            sampling=SamplingConfig.from_dict(doc.get("sampling", {})),
            k=metrics.get("k", DEFAULT_K),
            miss_threshold=metrics.get("miss_threshold", DEFAULT_MISS_THRESHOLD),
            miss_threshold_is_default="miss_threshold" not in metrics,
        )
        if "predictor" in doc:
            cfg.predictor = cfg.default_predictor(**doc["predictor"])
        return cfg

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
        return cls.from_dict(doc)

    def to_dict(self) -> dict:
        """Effective configuration with every default resolved."""
        return {
            "map": self.map,
            "output": self.output,
            "master_seed": self.master_seed,
            "num_samples": self.num_samples,
            "sampling": {**self.sampling.to_dict(), "effective_max_dist": self.sampling.effective_max_dist()},
            "predictor": self.predictor.to_dict(),
            "metrics": {"k": self.k, "miss_threshold": self.miss_threshold},
        }
