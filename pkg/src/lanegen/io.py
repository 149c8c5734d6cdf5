"""JSON-lines readers/writers for sample and prediction files."""

from __future__ import annotations

import json
from os import PathLike
from typing import Iterable

from .matching import PredictionSet
from .sample_gen import TrajectorySample


class SchemaError(ValueError):
    """A record does not match the expected file schema."""

    def __init__(self, path, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = str(path)
        self.line = line


_SAMPLE_KEYS = {
    "idx": int,
    "start_lanelet": int,
    "past": list,
    "futures": list,
    "v0": (int, float),
    "a_past": (int, float),
    "a_future": list,
    "path_ids": list,
}
_PREDICTION_KEYS = {"idx": int, "trajectories": list, "logits": list}


def _records(path, schema):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(path, lineno, f"invalid JSON: {exc.msg}") from None
            if not isinstance(rec, dict):
                raise SchemaError(path, lineno, "record is not an object")
            for key, typ in schema.items():
                if key not in rec:
                    raise SchemaError(path, lineno, f"missing key '{key}'")
                if not isinstance(rec[key], typ) or isinstance(rec[key], bool):
                    raise SchemaError(path, lineno, f"key '{key}' has the wrong type")
            yield lineno, rec


def write_jsonl(path: str | PathLike, records: Iterable[dict]) -> int:
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec))
            fh.write("\n")
            n += 1
    return n


def write_samples(path, samples: Iterable[TrajectorySample]) -> int:
    return write_jsonl(path, (s.to_record() for s in samples))


def read_samples(path) -> dict[int, TrajectorySample]:
    out: dict[int, TrajectorySample] = {}
    for lineno, rec in _records(path, _SAMPLE_KEYS):
        try:
            sample = TrajectorySample.from_record(rec)
        except (TypeError, ValueError) as exc:
            raise SchemaError(path, lineno, str(exc)) from None
        if not sample.futures:
            raise SchemaError(path, lineno, "sample has no futures")
        if sample.idx in out:
            raise SchemaError(path, lineno, f"duplicate idx {sample.idx}")
        out[sample.idx] = sample
    return out


def read_predictions(path) -> dict[int, PredictionSet]:
    out: dict[int, PredictionSet] = {}
    for lineno, rec in _records(path, _PREDICTION_KEYS):
        try:
            pred = PredictionSet(rec["trajectories"], rec["logits"])
        except (TypeError, ValueError) as exc:
            raise SchemaError(path, lineno, str(exc)) from None
        if rec["idx"] in out:
            raise SchemaError(path, lineno, f"duplicate idx {rec['idx']}")
        out[rec["idx"]] = pred
    return out


def write_predictions(path, predictions: Iterable[tuple[int, PredictionSet]]) -> int:
    return write_jsonl(path, (p.to_record(idx) for idx, p in predictions))
