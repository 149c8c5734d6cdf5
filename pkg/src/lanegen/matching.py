"""Prediction/ground-truth matching and the associated losses."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .validation import check_same_length, check_trajectories, check_trajectory

LAMBDA_ARGOVERSE = 0.5
LAMBDA_INTERACTION = 0.1


@dataclass(frozen=True)
class PredictionSet:
    trajectories: np.ndarray
    logits: np.ndarray

    def __post_init__(self):
        trajs = check_trajectories(self.trajectories, name="prediction trajectories")
        logits = np.asarray(self.logits, dtype=np.float64).reshape(-1)
        if len(logits) != len(trajs):
            raise ValueError(f"{len(trajs)} trajectories but {len(logits)} logits")
        object.__setattr__(self, "trajectories", trajs)
        object.__setattr__(self, "logits", logits)

    def __len__(self):
        return len(self.trajectories)

    def to_record(self, idx: int) -> dict:
        return {"idx": idx, "trajectories": self.trajectories.tolist(), "logits": self.logits.tolist()}


@dataclass(frozen=True)
class Assignment:
    """``matches[j]`` is the prediction index matched to ground truth ``j``."""

    matches: dict[int, int]
    total_cost: float


def mean_l2_cost(preds, gts) -> np.ndarray:
    """(n_gt, n_pred) matrix of per-point Euclidean distances averaged over points."""
    p = check_trajectories(preds, name="predictions")
    q = check_trajectories(gts, name="ground truths")
    check_same_length(p, q)
    return np.linalg.norm(q[:, None, :, :] - p[None, :, :, :], axis=-1).mean(axis=-1)


def _to_exact_ints(cost: np.ndarray) -> list[list[int]]:
    # every double is an exact dyadic rational; put them on a common denominator
    fracs = [[Fraction(float(c)) for c in row] for row in cost]
    den = max(f.denominator for row in fracs for f in row)
    return [[int(f * den) for f in row] for row in fracs]


def _solve_square(c: list[list[int]]) -> list[int]:
    """Minimum-cost perfect matching on a square integer matrix (shortest
    augmenting paths with row/column potentials). Returns row -> column."""
    n = len(c)
    inf = 2 * (max(abs(x) for row in c for x in row) * (n + 1) + 1) + 1
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    p = [0] * (n + 1)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [inf] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            row = c[i0 - 1]
            ui = u[i0]
            delta = inf
            j1 = 0
            for j in range(1, n + 1):
                if not used[j]:
                    cur = row[j - 1] - ui - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    assign = [0] * n
    for j in range(1, n + 1):
        assign[p[j] - 1] = j - 1
    return assign


def hungarian(cost) -> Assignment:
    """Optimal injective matching of ground truths (rows) to predictions (columns).

    Rectangular matrices are padded to square with a constant sentinel that
    exceeds any sum of real entries. Among optimal matchings, the one that is
    lexicographically smallest in (m_0, m_1, ...) is returned, so ties go to
    the lowest ground-truth index first, then the lowest prediction index.
    The solve runs on exactly rescaled integers, so ties are detected exactly.
    """
    c = np.asarray(cost, dtype=np.float64)
    if c.ndim != 2 or c.shape[0] < 1 or c.shape[1] < 1:
        raise ValueError(f"cost matrix must be 2-D and non-empty, got shape {c.shape}")
    if not np.all(np.isfinite(c)):
        raise ValueError("cost matrix has non-finite entries")
    n_gt, n_pred = c.shape
    n = max(n_gt, n_pred)

    exact = _to_exact_ints(c)
    sentinel = sum(abs(x) for row in exact for x in row) + 1
    # tie-break key: sum_i col(i) * n^(n-1-i) is minimised by the lexicographically smallest matching
    weight = n**n
    padded = []
    for i in range(n):
        digit = n ** (n - 1 - i) if i < n_gt else 0
        row = []
        for j in range(n):
            base = exact[i][j] if (i < n_gt and j < n_pred) else sentinel
            row.append(base * weight + j * digit)
        padded.append(row)

    assign = _solve_square(padded)
    matches = {i: assign[i] for i in range(n_gt) if assign[i] < n_pred}
    total = math.fsum(float(c[j, m]) for j, m in matches.items())
    return Assignment(matches, total)


def aux_loss(preds, gts) -> float:
    """Mean mean-L2 distance over Hungarian-matched pairs; unmatched predictions add 0."""
    trajs = preds.trajectories if isinstance(preds, PredictionSet) else preds
    cost = mean_l2_cost(trajs, gts)
    assignment = hungarian(cost)
    if not assignment.matches:
        return 0.0
    return math.fsum(cost[j, m] for j, m in assignment.matches.items()) / len(assignment.matches)


def closest_gt_targets(preds, gts) -> np.ndarray:
    """Index of the nearest ground truth (mean-L2) for each prediction; ties -> lowest."""
    trajs = preds.trajectories if isinstance(preds, PredictionSet) else preds
    return np.argmin(mean_l2_cost(trajs, gts), axis=0)


def smooth_l1(x):
    ax = np.abs(x)
    out = np.where(ax < 1.0, 0.5 * ax * ax, ax - 0.5)
    return float(out) if np.ndim(out) == 0 else out


def wta_main_loss(preds, gt) -> tuple[float, int]:
    """Smooth-L1 trajectory loss of the prediction with the smallest final displacement.

    Returns:
        (loss, winner) where loss sums smooth-L1 over x and y and averages over points.
    """
    trajs = preds.trajectories if isinstance(preds, PredictionSet) else check_trajectories(preds)
    g = check_trajectory(gt, name="ground truth")
    check_same_length(trajs, g[None])
    final = np.hypot(*(trajs[:, -1, :] - g[-1]).T)
    winner = int(np.argmin(final))
    loss = float(np.mean(np.sum(smooth_l1(trajs[winner] - g), axis=-1)))
    return loss, winner


def prob_loss(logits, target: int) -> float:
    """Softmax cross-entropy of ``target`` under ``logits``."""
    z = np.asarray(logits, dtype=np.float64).reshape(-1)
    if not 0 <= target < len(z):
        raise IndexError(f"target {target} out of range for {len(z)} logits")
    zmax = z.max()
    lse = zmax + math.log(np.exp(z - zmax).sum())
    return float(lse - z[target])


def main_loss(preds: PredictionSet, gt) -> float:
    """Trajectory loss plus probability loss, with the WTA winner as the target."""
    traj, winner = wta_main_loss(preds, gt)
    return traj + prob_loss(preds.logits, winner)


def combined_loss(main: float, aux: float, lam: float = LAMBDA_ARGOVERSE) -> float:
    return main + lam * aux
