"""Rule-based baseline: map-match the present position and roll constant speed
along every reachable guide-line."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .lane_graph import LaneGraph
from .matching import PredictionSet
from .path_search import DEFAULT_PATH_CAP, build_guideline, enumerate_future_paths
from .kinematics import interpolate_along
from .validation import check_graph, check_trajectory

SPEED_ESTIMATORS = ("last_step", "mean_past")
SEARCH_MARGIN = 10.0


@dataclass(frozen=True)
class PredictorConfig:
    k: int = 6
    speed_estimator: str = "last_step"
    horizon: float = 3.0
    dt: float = 0.1
    max_dist: float | None = None  # search distance beyond the matched position
    path_cap: int = DEFAULT_PATH_CAP

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.speed_estimator not in SPEED_ESTIMATORS:
            raise ValueError(f"speed_estimator must be one of {SPEED_ESTIMATORS}")
        if not self.horizon > 0 or not self.dt > 0:
            raise ValueError("horizon and dt must be positive")
        if self.max_dist is not None and not self.max_dist > 0:
            raise ValueError("max_dist must be positive")

    @property
    def n_future(self) -> int:
        return max(1, int(round(self.horizon / self.dt)))

    @classmethod
    def from_dict(cls, d: dict) -> "PredictorConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown predictor keys: {sorted(unknown)}")
        return cls(**d)

    def to_dict(self) -> dict:
        return asdict(self)


def project_to_polyline(points: np.ndarray, q) -> tuple[float, float]:
    """Distance from ``q`` to the polyline and the arc length of the foot point."""
    a, b = points[:-1], points[1:]
    d = b - a
    seg_len2 = np.einsum("ij,ij->i", d, d)
    t = np.clip(np.einsum("ij,ij->i", np.asarray(q) - a, d) / seg_len2, 0.0, 1.0)
    foot = a + t[:, None] * d
    dist = np.hypot(*(foot - q).T)
    k = int(np.argmin(dist))
    seg = np.sqrt(seg_len2)
    return float(dist[k]), float(seg[:k].sum() + t[k] * seg[k])


def map_match(graph: LaneGraph, point) -> int:
    """Lanelet whose centerline is nearest to ``point``; ties go to the lowest id."""
    q = np.asarray(point, dtype=np.float64)
    best = None
    for ll in graph:
        dist, _ = project_to_polyline(ll.centerline, q)
        key = (dist, ll.id)
        if best is None or key < best:
            best = key
    if best is None:
        raise ValueError("lane graph is empty")
    return best[1]


def estimate_speed(past: np.ndarray, dt: float, method: str = "last_step") -> float:
    if method == "last_step":
        return float(np.hypot(*(past[-1] - past[-2]))) / dt
    if method == "mean_past":
        return float(np.hypot(*np.diff(past, axis=0).T).sum()) / (dt * (len(past) - 1))
    raise ValueError(f"unknown speed estimator {method!r}")


def predict(graph: LaneGraph, past, cfg: PredictorConfig) -> PredictionSet:
    """Exactly ``cfg.k`` constant-speed modes, shortest path first.

    Paths beyond ``k`` are dropped; with fewer paths the last mode is repeated.
    Logits are the negated path lengths.
    """
    past = check_trajectory(past, name="past")
    if len(past) < 2:
        raise ValueError("past needs at least 2 points")
    speed = estimate_speed(past, cfg.dt, cfg.speed_estimator)
    n = cfg.n_future
    lid = map_match(graph, past[-1])
    _, offset = project_to_polyline(graph.lanelet(lid).centerline, past[-1])
    reach = cfg.max_dist if cfg.max_dist is not None else speed * cfg.horizon + SEARCH_MARGIN
    paths = enumerate_future_paths(graph, lid, offset + reach, cfg.path_cap)
    if not paths:
        raise ValueError(f"no path found from lanelet {lid}")
    paths = sorted(paths, key=lambda p: p.total_length)[: cfg.k]
    paths += [paths[-1]] * (cfg.k - len(paths))

    if speed == 0.0:
        trajs = np.repeat(past[-1][None, None, :], cfg.k, axis=0).repeat(n, axis=1)
    else:
        s = offset + np.arange(1, n + 1) * speed * cfg.dt
        trajs = np.stack([interpolate_along(build_guideline(graph, p), s) for p in paths])
    logits = np.array([-p.total_length for p in paths])
    return PredictionSet(trajs, logits)


class BaselinePredictor(BaseEstimator):
    """Estimator wrapper: ``fit`` stores the lane graph, ``predict`` maps a
    list of past trajectories to a list of :class:`PredictionSet`."""

    def __init__(self, k=6, speed_estimator="last_step", horizon=3.0, dt=0.1, max_dist=None,
                 path_cap=DEFAULT_PATH_CAP):
        self.k = k
        self.speed_estimator = speed_estimator
        self.horizon = horizon
        self.dt = dt
        self.max_dist = max_dist
        self.path_cap = path_cap

    @classmethod
    def from_config(cls, cfg: PredictorConfig) -> "BaselinePredictor":
        return cls(**cfg.to_dict())

    def fit(self, X: LaneGraph, y=None):
        self.graph_ = check_graph(X)
        self.config_ = PredictorConfig(**self.get_params())
        return self

    def predict(self, X) -> list[PredictionSet]:
        check_is_fitted(self, "graph_")
        return [predict(self.graph_, past, self.config_) for past in X]
