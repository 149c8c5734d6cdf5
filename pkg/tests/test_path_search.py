import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lanegen.lane_graph import LaneGraph, Lanelet
from lanegen.path_search import (
    PathCapExceeded,
    backward_guideline,
    backward_path,
    build_guideline,
    enumerate_future_paths,
)

from oracles import brute_force_paths, naive_polyline_length


def straight(i, x0, length):
    return Lanelet(i, [[x0, 0.0], [x0 + length, 0.0]])


@pytest.fixture
def small_dag():
    # A=0 -> B=1, C=2; B -> D=3; every lanelet 10 m
    lanelets = [straight(0, 0, 10), straight(1, 10, 10), Lanelet(2, [[10, 0], [16, 8]]), straight(3, 20, 10)]
    return LaneGraph(lanelets, {0: [1, 2], 1: [3]})


def ids(paths):
    return [p.node_ids for p in paths]


def test_exhaustive_small_dag(small_dag):
    assert ids(enumerate_future_paths(small_dag, 0, 100)) == [(0, 1, 3), (0, 2)]


def test_distance_cutoff(small_dag):
    assert ids(enumerate_future_paths(small_dag, 0, 15)) == [(0, 1), (0, 2)]


def test_two_node_cycle_terminates_by_distance():
    g = LaneGraph([straight(0, 0, 10), Lanelet(1, [[10, 0], [0, 0]])], {0: [1], 1: [0]})
    paths = enumerate_future_paths(g, 0, 35)
    assert ids(paths) == [(0, 1, 0, 1)]
    assert paths[0].total_length == pytest.approx(40.0)


def test_errors(small_dag):
    with pytest.raises(KeyError):
        enumerate_future_paths(small_dag, 42, 10)
    with pytest.raises(ValueError):
        enumerate_future_paths(small_dag, 0, 0)


def test_path_cap(grid):
    with pytest.raises(PathCapExceeded, match="cap of 2"):
        enumerate_future_paths(grid, 0, 1000, cap=2)


def random_graph(rng, n, cyclic):
    lengths = {i: float(rng.uniform(2.0, 20.0)) for i in range(n)}
    lanelets = [Lanelet(i, [[0.0, 0.0], [lengths[i], 0.0]]) for i in range(n)]
    lengths = {ll.id: ll.length for ll in lanelets}
    p = 0.35 if cyclic else 0.4
    succ = {}
    for u in range(n):
        cand = range(n) if cyclic else range(u + 1, n)
        succ[u] = [v for v in cand if rng.random() < p]
        rng.shuffle(succ[u])
    return LaneGraph(lanelets, succ), succ, lengths


def test_random_dags_match_oracle():
    rng = np.random.default_rng(0)
    for _ in range(100):
        g, succ, lengths = random_graph(rng, int(rng.integers(1, 11)), cyclic=False)
        start = int(rng.integers(len(g)))
        max_dist = float(rng.uniform(1.0, 80.0))
        got = ids(enumerate_future_paths(g, start, max_dist, cap=10**6))
        # same DFS order as the recursive oracle, not merely the same set
        assert got == brute_force_paths(succ, lengths, start, max_dist)


def test_stopping_dichotomy(grid):
    for start in grid.ids:
        for p in enumerate_future_paths(grid, start, 120.0):
            assert p.total_length >= 120.0 or not grid.successors(p.node_ids[-1])
            for u, v in zip(p.node_ids, p.node_ids[1:]):
                assert v in grid.successors(u)
            assert p.total_length == pytest.approx(sum(grid.lanelet(i).length for i in p.node_ids))


def test_enumeration_deterministic(roundabout):
    a = ids(enumerate_future_paths(roundabout, 6, 150.0))
    b = ids(enumerate_future_paths(roundabout, 6, 150.0))
    assert a == b and len(a) > 1


def test_guideline_dedups_shared_endpoint():
    g = LaneGraph([straight(0, 0, 10), straight(1, 10, 10)], {0: [1]})
    path = enumerate_future_paths(g, 0, 100)[0]
    gl = build_guideline(g, path)
    np.testing.assert_array_equal(gl.points, [[0, 0], [10, 0], [20, 0]])
    np.testing.assert_array_equal(gl.cum_arclen, [0, 10, 20])


def test_guideline_keeps_gap():
    g = LaneGraph([straight(0, 0, 10), straight(1, 10.5, 10)], {0: [1]})
    gl = build_guideline(g, enumerate_future_paths(g, 0, 100)[0])
    assert len(gl.points) == 4
    assert gl.length == pytest.approx(20.5)


def test_guideline_length_matches_naive(roundabout):
    for start in roundabout.ids:
        for p in enumerate_future_paths(roundabout, start, 120.0):
            gl = build_guideline(roundabout, p)
            assert gl.length == pytest.approx(naive_polyline_length(gl.points.tolist()), abs=1e-9)
            assert np.all(np.diff(gl.cum_arclen) > 0)
            assert len(gl.points) == len(gl.cum_arclen) and gl.cum_arclen[0] == 0
            # exact joints: merged length equals the sum of member lengths
            assert gl.length == pytest.approx(p.total_length, abs=1e-9)


def test_backward_chain(chain):
    rng = np.random.default_rng(0)
    assert backward_path(chain, 2, 100, rng).node_ids == (0, 1, 2)
    assert backward_path(chain, 0, 100, rng).node_ids == (0,)
    assert backward_path(chain, 4, 15, rng).node_ids == (2, 3, 4)
    with pytest.raises(KeyError):
        backward_path(chain, 17, 10, rng)


def test_backward_branching_deterministic():
    # two predecessors 1 and 2 merging into 0
    g = LaneGraph(
        [straight(0, 10, 10), Lanelet(1, [[0, 5], [10, 0]]), Lanelet(2, [[0, -5], [10, 0]])],
        {1: [0], 2: [0]},
    )
    picks = {backward_path(g, 0, 50, np.random.default_rng(s)).node_ids for s in range(40)}
    assert picks == {(1, 0), (2, 0)}
    for s in range(5):
        a = backward_path(g, 0, 50, np.random.default_rng(s))
        b = backward_path(g, 0, 50, np.random.default_rng(s))
        assert a == b


def test_backward_guideline_starts_at_origin(chain):
    path = backward_path(chain, 3, 100, np.random.default_rng(0))
    gl = backward_guideline(chain, path)
    np.testing.assert_array_equal(gl.points[0], chain.lanelet(3).centerline[0])
    assert gl.length == pytest.approx(30.0)
    # without predecessors the line continues straight behind the start
    gl0 = backward_guideline(chain, backward_path(chain, 0, 100, np.random.default_rng(0)))
    np.testing.assert_allclose(gl0.points, [[0, 0], [-10, 0]])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_cyclic_graphs_match_oracle(seed):
    rng = np.random.default_rng(seed)
    g, succ, lengths = random_graph(rng, int(rng.integers(1, 7)), cyclic=True)
    start = int(rng.integers(len(g)))
    max_dist = float(rng.uniform(1.0, 50.0))
    assert ids(enumerate_future_paths(g, start, max_dist, cap=10**6)) == brute_force_paths(
        succ, lengths, start, max_dist
    )
