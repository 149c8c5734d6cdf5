"""minADE_k / minFDE_k / MR_k, per trajectory set and over aligned files."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .io import read_predictions, read_samples
from .matching import aux_loss
from .validation import check_same_length, check_trajectories, check_trajectory

DEFAULT_MISS_THRESHOLD = 2.0
DEFAULT_K = 6


def _displacements(preds, gt) -> np.ndarray:
    p = check_trajectories(preds, name="predictions")
    g = check_trajectory(gt, name="ground truth")
    check_same_length(p, g[None])
    return np.hypot(p[..., 0] - g[:, 0], p[..., 1] - g[:, 1])


def min_fde(preds, gt) -> float:
    return float(_displacements(preds, gt)[:, -1].min())


def min_ade(preds, gt) -> float:
    return float(_displacements(preds, gt).mean(axis=1).min())


def is_miss(preds, gt, threshold: float = DEFAULT_MISS_THRESHOLD) -> bool:
    return min_fde(preds, gt) > threshold


@dataclass
class MetricReport:
    min_ade_k: float
    min_fde_k: float
    miss_rate_k: float
    k: int
    n_samples: int
    miss_threshold: float
    mean_aux_loss: float | None = None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    def table(self) -> str:
        rows = [
            ("samples", f"{self.n_samples}"),
            (f"minADE_{self.k}", f"{self.min_ade_k:.4f}"),
            (f"minFDE_{self.k}", f"{self.min_fde_k:.4f}"),
            (f"MR_{self.k} (@{self.miss_threshold:g} m)", f"{self.miss_rate_k:.4f}"),
        ]
        if self.mean_aux_loss is not None:
            rows.append(("mean aux loss", f"{self.mean_aux_loss:.4f}"))
        width = max(len(r[0]) for r in rows)
        return "\n".join(f"{name:<{width}}  {value}" for name, value in rows)


def sample_metrics(preds, futures, threshold: float = DEFAULT_MISS_THRESHOLD) -> tuple[float, float, bool]:
    """(minADE, minFDE, miss) of one prediction set against several futures.

    Each metric takes the best prediction against the closest future; with a
    single future this is the usual definition.
    """
    ade = min(min_ade(preds, f) for f in futures)
    fde = min(min_fde(preds, f) for f in futures)
    return ade, fde, fde > threshold


def aggregate(per_sample, k: int, threshold: float, aux=None, notes=None) -> MetricReport:
    per_sample = list(per_sample)
    n = len(per_sample)
    if n == 0:
        return MetricReport(0.0, 0.0, 0.0, k, 0, threshold, None, list(notes or []))
    ade = math.fsum(a for a, _, _ in per_sample) / n
    fde = math.fsum(f for _, f, _ in per_sample) / n
    mr = sum(m for _, _, m in per_sample) / n
    mean_aux = None if aux is None else math.fsum(aux) / n
    return MetricReport(ade, fde, mr, k, n, threshold, mean_aux, list(notes or []))


def evaluate_files(sample_file, prediction_file, k: int = DEFAULT_K,
                   threshold: float = DEFAULT_MISS_THRESHOLD, with_aux: bool = True,
                   threshold_is_default: bool = False) -> MetricReport:
    """Average per-sample metrics over a sample file and its aligned prediction file.

    Only the first ``k`` stored predictions of each record are scored. The
    auxiliary matching loss uses the same truncated set against all futures.

    Raises:
        KeyError: a sample idx has no prediction record.
        ValueError: ``k`` exceeds the stored predictions of some record.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    samples = read_samples(sample_file)
    preds = read_predictions(prediction_file)
    per_sample, aux = [], []
    for idx in sorted(samples):
        if idx not in preds:
            raise KeyError(f"no prediction record for sample idx {idx}")
        pred = preds[idx]
        if k > len(pred):
            raise ValueError(f"idx {idx}: k={k} exceeds the {len(pred)} stored predictions")
        top = pred.trajectories[:k]
        futures = samples[idx].futures
        per_sample.append(sample_metrics(top, futures, threshold))
        if with_aux:
            aux.append(aux_loss(top, futures))
    notes = ["multi-future samples are scored against the closest future"]
    if threshold_is_default:
        notes.append(f"miss threshold {threshold:g} m is the default, not a dataset setting")
    return aggregate(per_sample, k, threshold, aux if with_aux else None, notes)
