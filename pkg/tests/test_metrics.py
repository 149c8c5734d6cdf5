import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lanegen import io as lio
from lanegen.kinematics import SamplingConfig
from lanegen.maps import chain_map
from lanegen.matching import PredictionSet
from lanegen.metrics import (
    DEFAULT_MISS_THRESHOLD,
    MetricReport,
    aggregate,
    evaluate_files,
    is_miss,
    min_ade,
    min_fde,
    sample_metrics,
)
from lanegen.sample_gen import generate_dataset


def scan_metrics(preds, gt):
    """Plain loops over modes and timesteps."""
    best_ade = best_fde = math.inf
    for p in preds:
        dists = [math.hypot(p[t][0] - gt[t][0], p[t][1] - gt[t][1]) for t in range(len(gt))]
        best_ade = min(best_ade, sum(dists) / len(dists))
        best_fde = min(best_fde, dists[-1])
    return best_ade, best_fde


def test_identical_prediction_scores_zero():
    gt = np.c_[np.arange(10.0), np.zeros(10)]
    assert min_fde(gt[None], gt) == 0.0
    assert min_ade(gt[None], gt) == 0.0
    assert not is_miss(gt[None], gt)


def test_final_distance_example():
    gt = np.zeros((5, 2))
    preds = np.stack([np.tile([1.0, 0.0], (5, 1)), np.tile([0.0, 3.5], (5, 1))])
    assert min_fde(preds, gt) == 1.0
    assert not is_miss(preds, gt, 2.0)
    assert is_miss(preds, gt, 0.5)


def test_length_mismatch_rejected():
    with pytest.raises(ValueError):
        min_fde(np.zeros((2, 4, 2)), np.zeros((5, 2)))


def test_matches_exhaustive_scan():
    rng = np.random.default_rng(0)
    for _ in range(100):
        k, n = int(rng.integers(1, 8)), int(rng.integers(1, 20))
        preds = rng.normal(size=(k, n, 2)) * 5
        gt = rng.normal(size=(n, 2)) * 5
        ade, fde = scan_metrics(preds.tolist(), gt.tolist())
        assert min_ade(preds, gt) == pytest.approx(ade, abs=1e-12)
        assert min_fde(preds, gt) == pytest.approx(fde, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 6), st.integers(2, 15))
def test_extra_prediction_never_hurts(seed, k, n):
    rng = np.random.default_rng(seed)
    preds = rng.normal(size=(k, n, 2))
    gt = rng.normal(size=(n, 2))
    more = np.concatenate([preds, rng.normal(size=(1, n, 2))])
    assert min_fde(more, gt) <= min_fde(preds, gt)
    assert min_ade(more, gt) <= min_ade(preds, gt)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-1e3, 1e3), st.floats(-1e3, 1e3))
def test_translation_invariance(seed, dx, dy):
    rng = np.random.default_rng(seed)
    preds = rng.normal(size=(4, 8, 2)) * 3
    gt = rng.normal(size=(8, 2)) * 3
    shift = np.array([dx, dy])
    assert min_fde(preds + shift, gt + shift) == pytest.approx(min_fde(preds, gt), abs=1e-9)
    assert min_ade(preds + shift, gt + shift) == pytest.approx(min_ade(preds, gt), abs=1e-9)


def test_miss_rate_monotone_in_threshold():
    rng = np.random.default_rng(1)
    rows = [(rng.normal(size=(3, 6, 2)) * 2, rng.normal(size=(6, 2)) * 2) for _ in range(200)]
    rates = []
    for thr in np.linspace(0.0, 8.0, 33):
        rep = aggregate((sample_metrics(p, [g], thr) for p, g in rows), 3, thr)
        rates.append(rep.miss_rate_k)
    assert all(a >= b for a, b in zip(rates, rates[1:]))
    assert rates[0] == 1.0 and rates[-1] < 0.05


def test_multi_future_uses_closest():
    gt_a = np.zeros((4, 2))
    gt_b = np.full((4, 2), 10.0)
    pred = gt_b[None] + [0.5, 0.0]
    ade, fde, miss = sample_metrics(pred, [gt_a, gt_b])
    assert (ade, fde, miss) == (0.5, 0.5, False)


def test_aggregate_and_report():
    rep = aggregate([(1.0, 2.0, False), (3.0, 4.0, True)], 6, 2.0, aux=[0.5, 1.5])
    assert (rep.min_ade_k, rep.min_fde_k, rep.miss_rate_k, rep.mean_aux_loss) == (2.0, 3.0, 0.5, 1.0)
    assert rep.n_samples == 2
    assert "minFDE_6" in rep.table()
    assert rep.to_dict()["miss_threshold"] == 2.0
    empty = aggregate([], 6, 2.0)
    assert empty.n_samples == 0 and isinstance(empty, MetricReport)


@pytest.fixture
def sample_file(tmp_path):
    g = chain_map(20, 10.0)
    cfg = SamplingConfig(n_future=10)
    path = tmp_path / "s.jsonl"
    lio.write_samples(path, generate_dataset(g, cfg, 8, 3))
    return path


def replay(samples, k, shift=0.0):
    for idx, s in samples.items():
        trajs = np.stack([s.futures[0] + shift] + [s.futures[0] + 50.0] * (k - 1))
        yield idx, PredictionSet(trajs, np.zeros(k))


def test_evaluate_replay_is_zero(sample_file, tmp_path):
    samples = lio.read_samples(sample_file)
    pred_file = tmp_path / "p.jsonl"
    lio.write_predictions(pred_file, replay(samples, 3))
    rep = evaluate_files(sample_file, pred_file, k=3)
    assert rep.min_ade_k == rep.min_fde_k == rep.miss_rate_k == 0.0
    assert rep.mean_aux_loss == 0.0
    assert rep.n_samples == 8 and rep.miss_threshold == DEFAULT_MISS_THRESHOLD


def test_evaluate_hand_computed_offset(sample_file, tmp_path):
    samples = lio.read_samples(sample_file)
    pred_file = tmp_path / "p.jsonl"
    lio.write_predictions(pred_file, replay(samples, 2, shift=np.array([3.0, 4.0])))
    rep = evaluate_files(sample_file, pred_file, k=2, threshold=4.0)
    assert rep.min_fde_k == pytest.approx(5.0)
    assert rep.min_ade_k == pytest.approx(5.0)
    assert rep.miss_rate_k == 1.0
    # k=1 keeps only the shifted mode, so aux is its mean offset
    assert evaluate_files(sample_file, pred_file, k=1).mean_aux_loss == pytest.approx(5.0)


def test_evaluate_truncates_to_k(sample_file, tmp_path):
    samples = lio.read_samples(sample_file)
    pred_file = tmp_path / "p.jsonl"
    # first mode far away, second exact: k=1 misses, k=2 is perfect
    rows = ((i, PredictionSet(np.stack([s.futures[0] + 50.0, s.futures[0]]), [0.0, 0.0]))
            for i, s in samples.items())
    lio.write_predictions(pred_file, rows)
    assert evaluate_files(sample_file, pred_file, k=1).miss_rate_k == 1.0
    assert evaluate_files(sample_file, pred_file, k=2).min_fde_k == 0.0


def test_evaluate_errors(sample_file, tmp_path):
    samples = lio.read_samples(sample_file)
    pred_file = tmp_path / "p.jsonl"
    lio.write_predictions(pred_file, list(replay(samples, 2))[1:])
    with pytest.raises(KeyError, match="idx 0"):
        evaluate_files(sample_file, pred_file, k=2)
    lio.write_predictions(pred_file, replay(samples, 2))
    with pytest.raises(ValueError, match="exceeds"):
        evaluate_files(sample_file, pred_file, k=3)
    with pytest.raises(ValueError):
        evaluate_files(sample_file, pred_file, k=0)


def test_default_threshold_is_noted(sample_file, tmp_path):
    samples = lio.read_samples(sample_file)
    pred_file = tmp_path / "p.jsonl"
    lio.write_predictions(pred_file, replay(samples, 1))
    rep = evaluate_files(sample_file, pred_file, k=1, threshold_is_default=True)
    assert any("default" in n for n in rep.notes)
