"""Synthetic lane-graph builders: chain, fork, grid and roundabout layouts."""

from __future__ import annotations

import math

import numpy as np

from .lane_graph import LaneGraph, Lanelet

MAP_KINDS = ("chain", "fork", "grid", "roundabout")


def _segment(a, b, n_points: int) -> np.ndarray:
    t = np.linspace(0.0, 1.0, max(2, n_points))[:, None]
    return (1 - t) * np.asarray(a, float) + t * np.asarray(b, float)


def chain_map(n: int = 5, length: float = 10.0, n_points: int = 2) -> LaneGraph:
    """``n`` collinear lanelets along +x, each ``length`` meters."""
    if n < 1 or not length > 0:
        raise ValueError("chain needs n >= 1 and length > 0")
    lanelets = [Lanelet(i, _segment((i * length, 0.0), ((i + 1) * length, 0.0), n_points)) for i in range(n)]
    succ = {i: [i + 1] for i in range(n - 1)}
    return LaneGraph(lanelets, succ)


def fork_map(n_trunk: int = 3, n_branch: int = 3, length: float = 10.0,
             angle_deg: float = 30.0, n_points: int = 2) -> LaneGraph:
    """A straight trunk splitting into two straight branches at +/- ``angle_deg``.

    Ids: trunk 0..n_trunk-1, left branch next, then right branch.
    """
    if n_trunk < 1 or n_branch < 1 or not length > 0:
        raise ValueError("fork needs n_trunk >= 1, n_branch >= 1 and length > 0")
    lanelets = [
        Lanelet(i, _segment((i * length, 0.0), ((i + 1) * length, 0.0), n_points)) for i in range(n_trunk)
    ]
    succ = {i: [i + 1] for i in range(n_trunk - 1)}
    origin = np.array([n_trunk * length, 0.0])
    heads = []
    for sign in (1.0, -1.0):
        theta = math.radians(sign * angle_deg)
        d = np.array([math.cos(theta), math.sin(theta)]) * length
        first = len(lanelets)
        heads.append(first)
        for j in range(n_branch):
            lid = first + j
            lanelets.append(Lanelet(lid, _segment(origin + j * d, origin + (j + 1) * d, n_points)))
            if j < n_branch - 1:
                succ[lid] = [lid + 1]
    succ[n_trunk - 1] = heads
    return LaneGraph(lanelets, succ)


def grid_map(rows: int = 3, cols: int = 3, length: float = 50.0, n_points: int = 2) -> LaneGraph:
    """One-way Manhattan grid: eastbound and northbound lanelets between intersections."""
    if rows < 1 or cols < 1 or rows * cols < 2 or not length > 0:
        raise ValueError("grid needs at least two intersections and length > 0")
    ids = {}
    lanelets = []
    for r in range(rows):
        for c in range(cols):
            p = (c * length, r * length)
            if c + 1 < cols:
                ids[("E", r, c)] = len(lanelets)
                lanelets.append(Lanelet(len(lanelets), _segment(p, ((c + 1) * length, r * length), n_points)))
            if r + 1 < rows:
                ids[("N", r, c)] = len(lanelets)
                lanelets.append(Lanelet(len(lanelets), _segment(p, (c * length, (r + 1) * length), n_points)))

    def leaving(r, c):
        return [ids[k] for k in (("E", r, c), ("N", r, c)) if k in ids]

    succ = {}
    for (kind, r, c), lid in ids.items():
        end = (r, c + 1) if kind == "E" else (r + 1, c)
        succ[lid] = leaving(*end)
    return LaneGraph(lanelets, succ)


def roundabout_map(exits: int = 3, radius: float = 20.0, arm_length: float = 30.0,
                   arc_points: int = 8) -> LaneGraph:
    """Counter-clockwise ring with ``exits`` entry arms and ``exits`` exit arms.

    The ring is split into 2*exits arcs; entries join at even ring nodes,
    exits leave at odd ones. The ring arcs form a directed cycle.
    """
    if exits < 1 or not radius > 0 or not arm_length > 0:
        raise ValueError("roundabout needs exits >= 1, radius > 0, arm_length > 0")
    n_nodes = 2 * exits
    step = 2 * math.pi / n_nodes

    def ring_point(theta):
        return np.array([radius * math.cos(theta), radius * math.sin(theta)])

    lanelets = []
    for k in range(n_nodes):
        th = np.linspace(k * step, (k + 1) * step, max(2, arc_points))
        pts = np.stack([radius * np.cos(th), radius * np.sin(th)], axis=1)
        lanelets.append(Lanelet(k, pts))
    succ = {k: [(k + 1) % n_nodes] for k in range(n_nodes)}
    for e in range(exits):
        entry_node, exit_node = 2 * e, 2 * e + 1
        p_in = ring_point(entry_node * step)
        out_dir = p_in / radius
        entry_id = len(lanelets)
        lanelets.append(Lanelet(entry_id, _segment(p_in + out_dir * arm_length, p_in, 2)))
        succ[entry_id] = [entry_node]
        p_out = ring_point(exit_node * step)
        exit_id = len(lanelets)
        lanelets.append(Lanelet(exit_id, _segment(p_out, p_out + p_out / radius * arm_length, 2)))
        # the arc ending at exit_node may continue on the ring or leave
        succ[exit_node - 1] = [exit_node % n_nodes, exit_id]
    return LaneGraph(lanelets, succ)


def build_map(kind: str, **params) -> LaneGraph:
    builders = {"chain": chain_map, "fork": fork_map, "grid": grid_map, "roundabout": roundabout_map}
    if kind not in builders:
        raise ValueError(f"unknown map kind {kind!r}; choose from {MAP_KINDS}")
    return builders[kind](**params)


def graph_stats(graph: LaneGraph) -> dict:
    lengths = np.array([ll.length for ll in graph])
    indeg = {i: len(graph.predecessors(i)) for i in graph.ids}
    # Kahn's algorithm: any node left over sits on or behind a cycle
    queue = [i for i, d in indeg.items() if d == 0]
    remaining = dict(indeg)
    seen = 0
    while queue:
        u = queue.pop()
        seen += 1
        for v in graph.successors(u):
            remaining[v] -= 1
            if remaining[v] == 0:
                queue.append(v)
    return {
        "nodes": len(graph),
        "edges": graph.n_edges,
        "total_length": float(lengths.sum()) if len(lengths) else 0.0,
        "mean_lanelet_length": float(lengths.mean()) if len(lengths) else 0.0,
        "min_lanelet_length": float(lengths.min()) if len(lengths) else 0.0,
        "max_lanelet_length": float(lengths.max()) if len(lengths) else 0.0,
        "sources": sum(1 for d in indeg.values() if d == 0),
        "sinks": sum(1 for i in graph.ids if not graph.successors(i)),
        "has_cycle": seen < len(graph),
    }
