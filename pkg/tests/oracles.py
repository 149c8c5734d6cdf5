"""Independent brute-force / naive reference implementations used by the tests.

Nothing here imports the code under test beyond plain data types.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np


def naive_polyline_length(points) -> float:
    total = 0.0
    for (x0, y0), (x1, y1) in zip(points[:-1], points[1:]):
        total += math.sqrt((x1 - x0) ** 2 + (y1 - y0) ** 2)
    return total


def brute_force_paths(succ: dict, lengths: dict, start, max_dist):
    """Recursive enumeration with the same stopping rule: stop once the
    accumulated length reaches max_dist or the tip has no successors."""
    out = []

    def rec(path, dist):
        tip = path[-1]
        if dist >= max_dist or not succ.get(tip):
            out.append(tuple(path))
            return
        for nxt in succ[tip]:
            rec(path + [nxt], dist + lengths[nxt])

    rec([start], lengths[start])
    return out


def integrate_schedule(v0, a, dt, n, substeps=1000):
    """Trapezoidal integration of the clamped speed v(t) = max(v0 + a t, 0)."""
    h = dt / substeps
    v = np.maximum(v0 + a * h * np.arange(n * substeps + 1), 0.0)
    s = np.concatenate([[0.0], np.cumsum(0.5 * (v[:-1] + v[1:]) * h)])
    return s[substeps::substeps].tolist()


@lru_cache(maxsize=None)
def _injections(n_small: int, n_large: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n_large), n_small)), dtype=np.intp).reshape(-1, n_small)


def brute_force_assignment(cost) -> float:
    """Minimum total over all injective maps from the smaller side into the larger."""
    c = np.asarray(cost, dtype=float)
    if c.shape[0] > c.shape[1]:
        c = c.T
    k, m = c.shape
    perms = _injections(k, m)
    totals = c[np.arange(k)[None, :], perms].sum(axis=1)
    return float(totals.min())


def brute_force_all_assignments(cost):
    """Every injective row->column map (rows must not exceed columns), with its total."""
    c = np.asarray(cost, dtype=float)
    k, m = c.shape
    for perm in itertools.permutations(range(m), k):
        yield perm, sum(c[i, j] for i, j in enumerate(perm))


def naive_cost_matrix(preds, gts):
    out = np.zeros((len(gts), len(preds)))
    for j, q in enumerate(gts):
        for i, p in enumerate(preds):
            d = 0.0
            for (px, py), (qx, qy) in zip(p, q):
                d += math.hypot(px - qx, py - qy)
            out[j, i] = d / len(q)
    return out


def point_to_polyline(points, q):
    """Distance from q to the polyline and the arc length of the closest foot point."""
    best = (math.inf, 0.0)
    run = 0.0
    for (ax, ay), (bx, by) in zip(points[:-1], points[1:]):
        dx, dy = bx - ax, by - ay
        L2 = dx * dx + dy * dy
        t = ((q[0] - ax) * dx + (q[1] - ay) * dy) / L2
        t = min(1.0, max(0.0, t))
        fx, fy = ax + t * dx, ay + t * dy
        d = math.hypot(q[0] - fx, q[1] - fy)
        if d < best[0]:
            best = (d, run + t * math.sqrt(L2))
        run += math.sqrt(L2)
    return best
