"""Speed/acceleration sampling and constant-acceleration interpolation along guide-lines."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields

import numpy as np
from scipy.optimize import brentq

from .path_search import DEFAULT_PATH_CAP, Guideline, default_max_dist

FIXED_SPEED = 10.0


@dataclass(frozen=True)
class SamplingConfig:
    """Distribution parameters and ablation switches for sample synthesis.

    Defaults for the speed/acceleration/noise laws: U(0, 20) m/s initial
    speed, Laplace(0, 1.4) past acceleration, past + Laplace(0, 0.9) future
    acceleration, N(0, 1.0) m past noise.

    Ablations:
        fixed_length: v0 = 10 m/s and zero acceleration everywhere.
        fixed_speed: v0 = 10 m/s.
        fixed_acc: every future acceleration equals the past one.
        no_past_noise: the past is left on its guide-line.
    """

    speed_min: float = 0.0
    speed_max: float = 20.0
    past_acc_scale: float = 1.4
    fut_acc_scale: float = 0.9
    past_noise_std: float = 1.0
    accel_probability: float = 0.5
    dt: float = 0.1
    n_past: int = 20
    n_future: int = 30
    fixed_length: bool = False
    fixed_speed: bool = False
    fixed_acc: bool = False
    no_past_noise: bool = False
    max_dist: float | None = None
    path_cap: int = DEFAULT_PATH_CAP

    def __post_init__(self):
        if self.speed_min < 0 or not self.speed_max > self.speed_min:
            raise ValueError("need 0 <= speed_min < speed_max")
        if self.past_acc_scale < 0 or self.fut_acc_scale < 0 or self.past_noise_std < 0:
            raise ValueError("scales must be non-negative")
        if not 0.0 <= self.accel_probability <= 1.0:
            raise ValueError("accel_probability must lie in [0, 1]")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.n_past < 1 or self.n_future < 1:
            raise ValueError("n_past and n_future must be >= 1")
        if self.max_dist is not None and not self.max_dist > 0:
            raise ValueError("max_dist must be positive")
        if self.path_cap < 1:
            raise ValueError("path_cap must be >= 1")

    @classmethod
    def from_dict(cls, d: dict) -> "SamplingConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown sampling keys: {sorted(unknown)}")
        return cls(**d)

    def to_dict(self) -> dict:
        return asdict(self)

    @property
    def future_horizon(self) -> float:
        return self.n_future * self.dt

    @property
    def past_horizon(self) -> float:
        return (self.n_past - 1) * self.dt

    def future_accel_quantile(self, q: float = 0.999) -> float:
        """Quantile of the future-acceleration law (mixture of zero/Laplace past
        acceleration plus independent Laplace noise)."""
        p, b1, b2 = self.accel_probability, self.past_acc_scale, self.fut_acc_scale
        if self.fixed_length:
            return 0.0
        if self.fixed_acc:
            b2 = 0.0
        tail = 1.0 - q

        def survival(c: float) -> float:
            return (1 - p) * _laplace_sf(c, b2) + p * _laplace_sum_sf(c, b1, b2)

        if survival(0.0) <= tail:
            return 0.0
        hi = 1.0
        while survival(hi) > tail:
            hi *= 2.0
        return brentq(lambda c: survival(c) - tail, 0.0, hi, xtol=1e-12)

    def effective_max_dist(self) -> float:
        if self.max_dist is not None:
            return float(self.max_dist)
        vmax = FIXED_SPEED if (self.fixed_length or self.fixed_speed) else self.speed_max
        return default_max_dist(vmax, self.future_accel_quantile(), self.future_horizon)

    def effective_past_dist(self) -> float:
        vmax = FIXED_SPEED if (self.fixed_length or self.fixed_speed) else self.speed_max
        acap = 0.0 if self.fixed_length else self.past_acc_scale * math.log(1000.0)
        return default_max_dist(vmax, acap, self.past_horizon)


def _laplace_sf(c: float, b: float) -> float:
    # P(X > c) for X ~ Laplace(0, b), c >= 0
    if b == 0:
        return 0.0 if c >= 0 else 1.0
    return 0.5 * math.exp(-c / b)


def _laplace_sum_sf(c: float, b1: float, b2: float) -> float:
    # P(X + Y > c) for independent Laplace(0, b1), Laplace(0, b2), c >= 0
    if b1 == 0 or b2 == 0:
        return _laplace_sf(c, max(b1, b2))
    if math.isclose(b1, b2):
        return 0.25 * math.exp(-c / b1) * (2.0 + c / b1)
    d = b1 * b1 - b2 * b2
    return 0.5 * (b1 * b1 * math.exp(-c / b1) - b2 * b2 * math.exp(-c / b2)) / d


@dataclass(frozen=True)
class KinematicProfile:
    v0: float
    a_past: float
    a_future: tuple[float, ...]


def laplace(rng: np.random.Generator, scale: float) -> float:
    """Laplace(0, scale) draw by inverting the CDF of one uniform draw."""
    u = rng.random()
    while u == 0.0:
        u = rng.random()
    if u < 0.5:
        return scale * math.log(2.0 * u)
    return -scale * math.log(2.0 * (1.0 - u))


def sample_profile(rng: np.random.Generator, cfg: SamplingConfig, n_modes: int) -> KinematicProfile:
    """Draw initial speed, past acceleration and one future acceleration per mode.

    Draw order is fixed (speed, acceleration coin, past acceleration, then
    per-mode noise) so ablation flags never shift the random stream.
    """
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    v0 = cfg.speed_min + (cfg.speed_max - cfg.speed_min) * rng.random()
    accelerate = rng.random() < cfg.accel_probability
    a_past = laplace(rng, cfg.past_acc_scale)
    if not accelerate:
        a_past = 0.0
    noise = [laplace(rng, cfg.fut_acc_scale) for _ in range(n_modes)]
    if cfg.fixed_length:
        return KinematicProfile(FIXED_SPEED, 0.0, (0.0,) * n_modes)
    if cfg.fixed_speed:
        v0 = FIXED_SPEED
    if cfg.fixed_acc:
        noise = [0.0] * n_modes
    return KinematicProfile(float(v0), float(a_past), tuple(float(a_past + e) for e in noise))


def arc_length_schedule(v0: float, a: float, dt: float, n: int) -> np.ndarray:
    """Distance travelled at t = dt, 2dt, ..., n*dt under constant acceleration.

    Speed is clamped at zero: a decelerating agent halts and never reverses.
    """
    if v0 < 0:
        raise ValueError("v0 must be non-negative")
    if a == 0:
        return np.arange(1, n + 1) * v0 * dt
    t = np.arange(1, n + 1) * dt
    if a < 0:
        t = np.minimum(t, -v0 / a)
    s = v0 * t + 0.5 * a * t * t
    return np.maximum.accumulate(np.maximum(s, 0.0))


def interpolate_along(guideline: Guideline, arclens) -> np.ndarray:
    """Points at the given arc lengths along the guide-line.

    Arc lengths beyond the end are extrapolated along the last segment.
    """
    pts, cum = guideline.points, guideline.cum_arclen
    if len(pts) < 2:
        raise ValueError("guide-line needs at least 2 points to interpolate")
    s = np.asarray(arclens, dtype=np.float64).reshape(-1)
    if np.any(s < 0):
        raise ValueError("arc lengths must be non-negative")
    out = np.empty((len(s), 2))

    beyond = s >= cum[-1]
    if np.any(beyond):
        d = pts[-1] - pts[-2]
        d = d / np.hypot(*d)
        out[beyond] = pts[-1] + (s[beyond] - cum[-1])[:, None] * d

    inside = ~beyond
    if np.any(inside):
        si = s[inside]
        k = np.searchsorted(cum, si, side="right") - 1
        t = (si - cum[k]) / (cum[k + 1] - cum[k])
        out[inside] = pts[k] + t[:, None] * (pts[k + 1] - pts[k])
    return out


def add_past_noise(points, rng: np.random.Generator, std: float) -> np.ndarray:
    """Independent N(0, std^2) perturbation of every coordinate."""
    pts = np.asarray(points, dtype=np.float64)
    if std < 0:
        raise ValueError("std must be non-negative")
    if std == 0:
        return pts.copy()
    return pts + rng.normal(0.0, std, size=pts.shape)
