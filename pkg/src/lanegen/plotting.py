"""Dependency-free SVG panels: centerlines black, past gray, ground-truth
futures red, predictions blue with a dot at their final point."""

from __future__ import annotations

import numpy as np

from .lane_graph import LaneGraph
from .matching import PredictionSet
from .sample_gen import TrajectorySample

MARGIN = 15.0
SCALE = 8.0  # pixels per meter


def _polyline(points, transform, color, width, extra="") -> str:
    coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in transform(points))
    return (
        f'<polyline points="{coords}" fill="none" stroke="{color}" '
        f'stroke-width="{width}" stroke-linejoin="round"{extra}/>'
    )


def _dot(point, transform, color, r=3.0) -> str:
    x, y = transform(np.asarray(point)[None])[0]
    return f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{r}" fill="{color}"/>'


def render_sample_svg(graph: LaneGraph, sample: TrajectorySample,
                      prediction: PredictionSet | None = None) -> str:
    pts = [sample.past, *sample.futures]
    if prediction is not None:
        pts.extend(prediction.trajectories)
    allpts = np.concatenate(pts, axis=0)
    lo = allpts.min(axis=0) - MARGIN
    hi = allpts.max(axis=0) + MARGIN
    width, height = (hi - lo) * SCALE

    def transform(p):
        p = np.asarray(p, dtype=float)
        return np.stack([(p[:, 0] - lo[0]) * SCALE, (hi[1] - p[:, 1]) * SCALE], axis=1)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.2f} {height:.2f}">',
        f'<rect width="100%" height="100%" fill="white"/>',
        '<g id="centerlines">',
    ]
    for ll in graph:
        box_lo, box_hi = ll.centerline.min(axis=0), ll.centerline.max(axis=0)
        if np.any(box_hi < lo) or np.any(box_lo > hi):
            continue
        parts.append(_polyline(ll.centerline, transform, "black", 1.0))
    parts.append("</g>")

    parts.append('<g id="past">')
    parts.append(_polyline(sample.past, transform, "gray", 2.0))
    parts.append("</g>")
    parts.append('<g id="ground-truth">')
    for fut in sample.futures:
        parts.append(_polyline(np.vstack([sample.past[-1:], fut]), transform, "red", 2.0))
    parts.append("</g>")
    if prediction is not None:
        parts.append('<g id="predictions">')
        for traj in prediction.trajectories:
            parts.append(_polyline(traj, transform, "blue", 1.5, ' stroke-opacity="0.8"'))
            parts.append(_dot(traj[-1], transform, "blue"))
        parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
