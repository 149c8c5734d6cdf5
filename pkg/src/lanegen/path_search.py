"""Forward path enumeration, guide-line construction and backward (history) paths."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lane_graph import LaneGraph

DEFAULT_PATH_CAP = 64
JOINT_TOLERANCE = 1e-6


class PathCapExceeded(RuntimeError):
    """Raised when enumeration would return more paths than the configured cap."""

    def __init__(self, cap: int):
        super().__init__(f"path enumeration exceeded the cap of {cap} paths")
        self.cap = cap


@dataclass(frozen=True)
class LanePath:
    node_ids: tuple[int, ...]
    total_length: float


@dataclass(frozen=True, eq=False)
class Guideline:
    """Polyline with its cumulative arc-length table (cum_arclen[0] == 0)."""

    points: np.ndarray
    cum_arclen: np.ndarray

    @property
    def length(self) -> float:
        return float(self.cum_arclen[-1])

    @classmethod
    def from_points(cls, points) -> "Guideline":
        pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
        cum = np.zeros(len(pts))
        if len(pts) > 1:
            cum[1:] = np.cumsum(np.hypot(*np.diff(pts, axis=0).T))
        return cls(pts, cum)


def enumerate_future_paths(
    graph: LaneGraph, start: int, max_dist: float, cap: int = DEFAULT_PATH_CAP
) -> list[LanePath]:
    """All successor paths from ``start`` in DFS order.

    A branch ends once its accumulated length reaches ``max_dist`` or its tip
    has no successors. Revisiting lanelets is allowed; every lanelet has
    positive length, so cycles terminate on the distance bound.
    """
    if start not in graph:
        raise KeyError(f"unknown lanelet id {start}")
    if not max_dist > 0:
        raise ValueError(f"max_dist must be positive, got {max_dist}")

    paths: list[LanePath] = []
    stack = [((start,), graph.lanelet(start).length)]
    while stack:
        ids, dist = stack.pop()
        succ = graph.successors(ids[-1])
        if dist >= max_dist or not succ:
            if len(paths) >= cap:
                raise PathCapExceeded(cap)
            paths.append(LanePath(ids, dist))
            continue
        for s in reversed(succ):
            stack.append((ids + (s,), dist + graph.lanelet(s).length))
    return paths


def _concat(polylines) -> np.ndarray:
    out = [polylines[0]]
    last = polylines[0][-1]
    for pl in polylines[1:]:
        if np.hypot(*(pl[0] - last)) <= JOINT_TOLERANCE:
            pl = pl[1:]
        out.append(pl)
        last = pl[-1]
    return np.concatenate(out, axis=0)


def build_guideline(graph: LaneGraph, path: LanePath) -> Guideline:
    """Concatenate member centerlines, dropping duplicate joint points."""
    lines = [graph.lanelet(i).centerline for i in path.node_ids]
    return Guideline.from_points(_concat(lines))


def backward_path(graph: LaneGraph, start: int, max_dist: float, rng: np.random.Generator) -> LanePath:
    """One predecessor chain ending at ``start``, ordered earliest first.

    At a branching, a predecessor is picked uniformly with ``rng``. The
    chain grows until the predecessors ahead of ``start`` cover
    ``max_dist`` or no predecessor exists.
    """
    if start not in graph:
        raise KeyError(f"unknown lanelet id {start}")
    if not max_dist > 0:
        raise ValueError(f"max_dist must be positive, got {max_dist}")
    ids = [start]
    behind = 0.0
    while behind < max_dist:
        preds = graph.predecessors(ids[-1])
        if not preds:
            break
        pick = preds[int(rng.integers(len(preds)))] if len(preds) > 1 else preds[0]
        ids.append(pick)
        behind += graph.lanelet(pick).length
    ids.reverse()
    total = sum(graph.lanelet(i).length for i in ids)
    return LanePath(tuple(ids), total)


def backward_guideline(graph: LaneGraph, path: LanePath) -> Guideline:
    """Guide-line running backward in time from the start lanelet's origin.

    The predecessors of ``path`` are concatenated and reversed so that
    arc length 0 is the start position. Without predecessors the line is
    continued straight behind the start along its first segment.
    """
    start = graph.lanelet(path.node_ids[-1]).centerline
    origin = start[0]
    if len(path.node_ids) == 1:
        return Guideline.from_points([origin, origin - (start[1] - start[0])])
    lines = [graph.lanelet(i).centerline for i in path.node_ids[:-1]]
    pts = _concat(lines)
    if np.hypot(*(pts[-1] - origin)) > JOINT_TOLERANCE:
        pts = np.vstack([pts, origin])
    else:
        pts = pts.copy()
        pts[-1] = origin
    return Guideline.from_points(pts[::-1])


def default_max_dist(speed_max: float, accel_cap: float, horizon: float, margin: float = 10.0) -> float:
    """Distance bound covering the fastest sampled motion over ``horizon``."""
    return speed_max * horizon + 0.5 * max(accel_cap, 0.0) * horizon**2 + margin
