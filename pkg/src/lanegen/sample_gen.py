"""Assembly of Map Trajectories samples: one noisy past, several futures."""

from __future__ import annotations

import collections
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from typing import Iterator

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .kinematics import (
    KinematicProfile,
    SamplingConfig,
    add_past_noise,
    arc_length_schedule,
    interpolate_along,
    sample_profile,
)
from .lane_graph import LaneGraph
from .path_search import (
    PathCapExceeded,
    backward_guideline,
    backward_path,
    build_guideline,
    enumerate_future_paths,
)
from .validation import check_graph

REJECTION_WINDOW = 1000
MAX_REJECTION_RATE = 0.99


class MapUnusableError(RuntimeError):
    """Too many starting lanelets are rejected for the map to be sampled."""


@dataclass(eq=False)
class TrajectorySample:
    past: np.ndarray
    futures: list[np.ndarray]
    start_lanelet: int
    profile: KinematicProfile
    path_ids: list[tuple[int, ...]]
    idx: int | None = None

    def to_record(self) -> dict:
        return {
            "idx": self.idx,
            "start_lanelet": self.start_lanelet,
            "past": self.past.tolist(),
            "futures": [f.tolist() for f in self.futures],
            "v0": self.profile.v0,
            "a_past": self.profile.a_past,
            "a_future": list(self.profile.a_future),
            "path_ids": [list(p) for p in self.path_ids],
        }

    @classmethod
    def from_record(cls, rec: dict) -> "TrajectorySample":
        return cls(
            past=np.asarray(rec["past"], dtype=np.float64).reshape(-1, 2),
            futures=[np.asarray(f, dtype=np.float64).reshape(-1, 2) for f in rec["futures"]],
            start_lanelet=int(rec["start_lanelet"]),
            profile=KinematicProfile(
                float(rec["v0"]), float(rec["a_past"]), tuple(float(a) for a in rec["a_future"])
            ),
            path_ids=[tuple(int(i) for i in p) for p in rec["path_ids"]],
            idx=rec.get("idx"),
        )


@dataclass
class GenerationStats:
    attempts: int = 0
    rejections: int = 0
    emitted: int = 0
    mode_histogram: dict[int, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "attempts": self.attempts,
            "rejections": self.rejections,
            "emitted": self.emitted,
            "modes": {str(k): v for k, v in sorted(self.mode_histogram.items())},
        }


def start_position(graph: LaneGraph, start: int) -> np.ndarray:
    return graph.lanelet(start).centerline[0].copy()


def past_trajectory(graph: LaneGraph, start: int, profile: KinematicProfile,
                    cfg: SamplingConfig, rng: np.random.Generator) -> np.ndarray:
    """Noise-free past, oldest point first, ending at the start position.

    Position at time -k*dt follows the constant-acceleration law run
    backward: the agent was slower in the past when a_past > 0, and the
    zero-speed clamp holds it still before it started moving.
    """
    bpath = backward_path(graph, start, cfg.effective_past_dist(), rng)
    guide = backward_guideline(graph, bpath)
    if len(guide.points) < 2 and cfg.n_past > 1:
        raise ValueError(f"lanelet {start}: backward guide-line has a single point")
    behind = arc_length_schedule(profile.v0, -profile.a_past, cfg.dt, cfg.n_past - 1)
    dist = np.concatenate([[0.0], behind])[::-1]
    return interpolate_along(guide, dist)


def generate_sample(graph: LaneGraph, start: int, cfg: SamplingConfig,
                    rng: np.random.Generator) -> TrajectorySample:
    """One sample starting at the first centerline vertex of ``start``."""
    paths = enumerate_future_paths(graph, start, cfg.effective_max_dist(), cfg.path_cap)
    profile = sample_profile(rng, cfg, len(paths))
    futures = []
    for path, acc in zip(paths, profile.a_future):
        guide = build_guideline(graph, path)
        futures.append(interpolate_along(guide, arc_length_schedule(profile.v0, acc, cfg.dt, cfg.n_future)))
    past = past_trajectory(graph, start, profile, cfg, rng)
    if not cfg.no_past_noise:
        past = add_past_noise(past, rng, cfg.past_noise_std)
    return TrajectorySample(past, futures, start, profile, [p.node_ids for p in paths])


def _sample_seed_stream(master_seed: int, idx: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(master_seed), int(idx)]))


def _draw_one(graph, ids, cfg, master_seed, idx):
    rng = _sample_seed_stream(master_seed, idx)
    for attempt in range(1, REJECTION_WINDOW + 1):
        start = ids[int(rng.integers(len(ids)))]
        try:
            sample = generate_sample(graph, start, cfg, rng)
        except PathCapExceeded:
            continue
        sample.idx = idx
        return sample, attempt
    return None, REJECTION_WINDOW


def resolve_workers(workers: int | None = None) -> int:
    if workers is None:
        workers = int(os.environ.get("LANEGEN_THREADS", "1") or 1)
    return max(1, int(workers))


def generate_dataset(graph: LaneGraph, cfg: SamplingConfig, n_samples: int, master_seed: int,
                     workers: int | None = None,
                     stats: GenerationStats | None = None) -> Iterator[TrajectorySample]:
    """Yield ``n_samples`` samples in index order.

    Sample k draws its start lanelet and everything else from a stream
    seeded by (master_seed, k), so the output does not depend on the number
    of workers. Starts whose path count exceeds the cap are redrawn.

    Raises:
        MapUnusableError: more than 99% of the last 1000 attempts were rejected.
    """
    if len(graph) == 0:
        raise ValueError("graph has no lanelets")
    if n_samples < 0:
        raise ValueError("n_samples must be non-negative")
    ids = graph.ids
    workers = resolve_workers(workers)
    stats = stats if stats is not None else GenerationStats()
    window: collections.deque[bool] = collections.deque(maxlen=REJECTION_WINDOW)
    limit = MAX_REJECTION_RATE * REJECTION_WINDOW

    def outcomes(batch):
        if workers == 1:
            return (_draw_one(graph, ids, cfg, master_seed, k) for k in batch)
        return pool.map(lambda k: _draw_one(graph, ids, cfg, master_seed, k), batch)

    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        batch_size = 64 * workers
        for lo in range(0, n_samples, batch_size):
            for sample, attempts in outcomes(range(lo, min(lo + batch_size, n_samples))):
                stats.attempts += attempts
                failed = attempts - (sample is not None)
                stats.rejections += failed
                window.extend([True] * failed)
                if sample is not None:
                    window.append(False)
                if len(window) == REJECTION_WINDOW and sum(window) > limit:
                    raise MapUnusableError(
                        f"rejection rate above {MAX_REJECTION_RATE:.0%} over "
                        f"{REJECTION_WINDOW} consecutive attempts; map unusable"
                    )
                stats.emitted += 1
                n = len(sample.futures)
                stats.mode_histogram[n] = stats.mode_histogram.get(n, 0) + 1
                yield sample
    finally:
        if pool is not None:
            pool.shutdown(wait=True, cancel_futures=True)


def generate_mt_ground_truths(graph: LaneGraph, start: int, gt_distance: float, horizon: float,
                              n_future: int, max_dist: float | None = None,
                              cap: int | None = None) -> list[np.ndarray]:
    """Zero-acceleration futures covering exactly ``gt_distance`` over ``horizon``.

    Used when the map task runs alongside real trajectory prediction: the
    speed is chosen so that every mode travels as far as the real ground
    truth.
    """
    if gt_distance < 0:
        raise ValueError("gt_distance must be non-negative")
    if not horizon > 0:
        raise ValueError("horizon must be positive")
    kwargs = {} if cap is None else {"cap": cap}
    bound = max_dist if max_dist is not None else gt_distance + 10.0
    paths = enumerate_future_paths(graph, start, bound, **kwargs)
    speed = gt_distance / horizon
    s = np.arange(1, n_future + 1) * speed * (horizon / n_future)
    if n_future:
        s[-1] = gt_distance
    return [interpolate_along(build_guideline(graph, p), s) for p in paths]


class MapTrajectoryGenerator(BaseEstimator):
    """Estimator-style wrapper around sample synthesis.

    ``fit`` takes a lane graph; ``transform`` maps start lanelet ids to
    samples; ``generate`` draws a seeded dataset.

    Parameters mirror :class:`SamplingConfig`; ``random_state`` seeds
    ``transform`` and is the default master seed of ``generate``.
    """

    def __init__(self, speed_min=0.0, speed_max=20.0, past_acc_scale=1.4, fut_acc_scale=0.9,
                 past_noise_std=1.0, accel_probability=0.5, dt=0.1, n_past=20, n_future=30,
                 fixed_length=False, fixed_speed=False, fixed_acc=False, no_past_noise=False,
                 max_dist=None, path_cap=64, random_state=None):
        self.speed_min = speed_min
        self.speed_max = speed_max
        self.past_acc_scale = past_acc_scale
        self.fut_acc_scale = fut_acc_scale
        self.past_noise_std = past_noise_std
        self.accel_probability = accel_probability
        self.dt = dt
        self.n_past = n_past
        self.n_future = n_future
        self.fixed_length = fixed_length
        self.fixed_speed = fixed_speed
        self.fixed_acc = fixed_acc
        self.no_past_noise = no_past_noise
        self.max_dist = max_dist
        self.path_cap = path_cap
        self.random_state = random_state

    @classmethod
    def from_config(cls, cfg: SamplingConfig, random_state=None) -> "MapTrajectoryGenerator":
        return cls(**cfg.to_dict(), random_state=random_state)

    def _config(self) -> SamplingConfig:
        names = [f.name for f in fields(SamplingConfig)]
        return SamplingConfig(**{n: getattr(self, n) for n in names})

    def fit(self, X: LaneGraph, y=None):
        self.graph_ = check_graph(X)
        self.config_ = self._config()
        self.max_dist_ = self.config_.effective_max_dist()
        self.n_lanelets_ = len(self.graph_)
        return self

    def transform(self, X) -> list[TrajectorySample]:
        check_is_fitted(self, "graph_")
        rng = np.random.default_rng(self.random_state)
        return [generate_sample(self.graph_, int(s), self.config_, rng) for s in X]

    def generate(self, n_samples: int, seed: int | None = None, workers: int | None = None,
                 stats: GenerationStats | None = None) -> list[TrajectorySample]:
        check_is_fitted(self, "graph_")
        seed = self.random_state if seed is None else seed
        if seed is None:
            seed = 0
        return list(generate_dataset(self.graph_, self.config_, n_samples, seed, workers, stats))
