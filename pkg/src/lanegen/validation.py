"""Input validation helpers shared by estimators, losses and metrics."""

from __future__ import annotations

import numpy as np

from .lane_graph import LaneGraph


def check_graph(graph) -> LaneGraph:
    if not isinstance(graph, LaneGraph):
        raise TypeError(f"expected a LaneGraph, got {type(graph).__name__}")
    if len(graph) == 0:
        raise ValueError("lane graph is empty")
    return graph


def check_trajectory(traj, n_points: int | None = None, name: str = "trajectory") -> np.ndarray:
    """Return ``traj`` as a finite (N, 2) float array."""
    arr = np.asarray(traj, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 1:
        raise ValueError(f"{name} must have shape (N, 2), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    if n_points is not None and arr.shape[0] != n_points:
        raise ValueError(f"{name} has {arr.shape[0]} points, expected {n_points}")
    return arr


def check_trajectories(trajs, n_points: int | None = None, name: str = "trajectories") -> np.ndarray:
    """Return a stack of equal-length trajectories as a (K, N, 2) array."""
    if isinstance(trajs, np.ndarray):
        arr = np.asarray(trajs, dtype=np.float64)
    else:
        items = [np.asarray(t, dtype=np.float64) for t in trajs]
        if not items:
            raise ValueError(f"{name} is empty")
        lengths = {t.shape[0] if t.ndim else -1 for t in items}
        if len(lengths) != 1:
            raise ValueError(f"{name} have mismatched point counts {sorted(lengths)}")
        arr = np.stack(items)
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must have shape (K, N, 2), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contain non-finite values")
    if n_points is not None and arr.shape[1] != n_points:
        raise ValueError(f"{name} have {arr.shape[1]} points, expected {n_points}")
    return arr


def check_same_length(preds: np.ndarray, gts: np.ndarray) -> None:
    if preds.shape[1] != gts.shape[1]:
        raise ValueError(
            f"point count mismatch: predictions have {preds.shape[1]}, ground truths {gts.shape[1]}"
        )
