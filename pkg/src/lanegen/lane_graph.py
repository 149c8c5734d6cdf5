"""Lane-graph model: lanelets with centerlines, successor/predecessor adjacency,
and ingestion of the JSON map format."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from os import PathLike
from typing import Iterable, Mapping, Sequence

import numpy as np

MAP_FORMAT_VERSION = 1


class MapFormatError(ValueError):
    """Raised when a map document cannot be parsed."""


class MapValidationError(ValueError):
    """Raised when a parsed map violates a graph invariant.

    Attributes:
        lanelet_id: id of the offending lanelet (or referenced id).
    """

    def __init__(self, message: str, lanelet_id: int | None = None):
        super().__init__(message)
        self.lanelet_id = lanelet_id


@dataclass(frozen=True, eq=False)
class Lanelet:
    """A lane segment with an ordered planar centerline (meters)."""

    id: int
    centerline: np.ndarray
    length: float = field(init=False)

    def __post_init__(self):
        pts = np.array(self.centerline, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise MapValidationError(
                f"lanelet {self.id}: centerline must be a list of [x, y] points", self.id
            )
        if len(pts) < 2:
            raise MapValidationError(
                f"lanelet {self.id}: centerline needs at least 2 points, got {len(pts)}", self.id
            )
        if not np.all(np.isfinite(pts)):
            raise MapValidationError(f"lanelet {self.id}: non-finite coordinate", self.id)
        seg = np.hypot(*np.diff(pts, axis=0).T)
        if np.any(seg <= 0.0):
            k = int(np.argmin(seg))
            raise MapValidationError(
                f"lanelet {self.id}: zero-length segment between points {k} and {k + 1}", self.id
            )
        pts.setflags(write=False)
        object.__setattr__(self, "centerline", pts)
        object.__setattr__(self, "length", float(seg.sum()))


def arc_length(lanelet: Lanelet) -> float:
    """Sum of the Euclidean segment lengths of the lanelet centerline."""
    return lanelet.length


class LaneGraph:
    """Immutable directed graph of lanelets.

    Adjacency lists keep file declaration order. Predecessor lists are
    derived from successors, ordered by the declaring lanelet's position in
    the file.
    """

    def __init__(self, lanelets: Iterable[Lanelet], successors: Mapping[int, Sequence[int]]):
        self._lanelets: dict[int, Lanelet] = {}
        for lanelet in lanelets:
            if not isinstance(lanelet.id, (int, np.integer)) or isinstance(lanelet.id, bool):
                raise MapValidationError(f"lanelet id {lanelet.id!r} is not an integer")
            if lanelet.id < 0:
                raise MapValidationError(f"lanelet id {lanelet.id} is negative", lanelet.id)
            if lanelet.id in self._lanelets:
                raise MapValidationError(f"duplicate lanelet id {lanelet.id}", lanelet.id)
            self._lanelets[int(lanelet.id)] = lanelet

        self._succ: dict[int, tuple[int, ...]] = {}
        pred: dict[int, list[int]] = {i: [] for i in self._lanelets}
        for lid in self._lanelets:
            succ = tuple(int(s) for s in successors.get(lid, ()))
            for s in succ:
                if s not in self._lanelets:
                    raise MapValidationError(
                        f"lanelet {lid}: successor {s} does not exist", s
                    )
            if len(set(succ)) != len(succ):
                raise MapValidationError(f"lanelet {lid}: duplicate successor entry", lid)
            self._succ[lid] = succ
            for s in succ:
                pred[s].append(lid)
        extra = set(successors) - set(self._lanelets)
        if extra:
            bad = min(extra)
            raise MapValidationError(f"adjacency given for unknown lanelet {bad}", bad)
        self._pred = {k: tuple(v) for k, v in pred.items()}

    def __len__(self) -> int:
        return len(self._lanelets)

    def __contains__(self, lanelet_id) -> bool:
        return lanelet_id in self._lanelets

    def __iter__(self):
        return iter(self._lanelets.values())

    @property
    def ids(self) -> list[int]:
        return list(self._lanelets)

    def lanelet(self, lanelet_id: int) -> Lanelet:
        try:
            return self._lanelets[lanelet_id]
        except KeyError:
            raise KeyError(f"unknown lanelet id {lanelet_id}") from None

    def successors(self, lanelet_id: int) -> list[int]:
        self.lanelet(lanelet_id)
        return list(self._succ[lanelet_id])

    def predecessors(self, lanelet_id: int) -> list[int]:
        self.lanelet(lanelet_id)
        return list(self._pred[lanelet_id])

    @property
    def n_edges(self) -> int:
        return sum(len(s) for s in self._succ.values())

    def to_dict(self) -> dict:
        return {
            "format": MAP_FORMAT_VERSION,
            "lanelets": [
                {
                    "id": ll.id,
                    "centerline": ll.centerline.tolist(),
                    "successors": list(self._succ[ll.id]),
                }
                for ll in self._lanelets.values()
            ],
        }


def successors(graph: LaneGraph, lanelet_id: int) -> list[int]:
    return graph.successors(lanelet_id)


def predecessors(graph: LaneGraph, lanelet_id: int) -> list[int]:
    return graph.predecessors(lanelet_id)


def graph_from_dict(doc) -> LaneGraph:
    """Build a validated graph from a parsed map document."""
    if not isinstance(doc, dict):
        raise MapFormatError("map document must be a JSON object")
    if "format" not in doc:
        raise MapFormatError("missing top-level 'format' field")
    if doc["format"] != MAP_FORMAT_VERSION:
        raise MapFormatError(f"unsupported map format {doc['format']!r}")
    records = doc.get("lanelets")
    if not isinstance(records, list):
        raise MapFormatError("'lanelets' must be a list")

    lanelets = []
    adjacency = {}
    for n, rec in enumerate(records):
        if not isinstance(rec, dict):
            raise MapFormatError(f"lanelet record {n} is not an object")
        for key in ("id", "centerline"):
            if key not in rec:
                raise MapFormatError(f"lanelet record {n}: missing '{key}'")
        lid = rec["id"]
        if not isinstance(lid, int) or isinstance(lid, bool):
            raise MapFormatError(f"lanelet record {n}: id must be an integer")
        succ = rec.get("successors", [])
        if not isinstance(succ, list) or not all(
            isinstance(s, int) and not isinstance(s, bool) for s in succ
        ):
            raise MapFormatError(f"lanelet {lid}: successors must be a list of integers")
        cl = rec["centerline"]
        if not isinstance(cl, list) or not all(
            isinstance(p, list)
            and len(p) == 2
            and all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in p)
            for p in cl
        ):
            raise MapFormatError(f"lanelet {lid}: centerline must be a list of [x, y] numbers")
        if lid in adjacency:
            raise MapValidationError(f"duplicate lanelet id {lid}", lid)
        lanelets.append(Lanelet(lid, cl))
        adjacency[lid] = succ
    return LaneGraph(lanelets, adjacency)


def load_lane_graph(path: str | PathLike) -> LaneGraph:
    """Read and validate a map file.

    Raises:
        MapFormatError: malformed JSON or record.
        MapValidationError: dangling edge, short centerline, zero-length segment.
    """
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MapFormatError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    return graph_from_dict(doc)


def dumps_lane_graph(graph: LaneGraph) -> str:
    """Canonical text form: one lanelet record per line."""
    doc = graph.to_dict()
    lines = [json.dumps(rec) for rec in doc["lanelets"]]
    body = ",\n".join(lines)
    return '{"format": %d, "lanelets": [\n%s\n]}\n' % (doc["format"], body)


def save_lane_graph(graph: LaneGraph, path: str | PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_lane_graph(graph))
