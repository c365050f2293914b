"""Deterministic SVG drawings of networks and traces.

Nodes follow the usual string-figure legend: a node is drawn as a square
if it ends some cord and as a circle otherwise, filled if anchored and
open if free.  Cords are polylines through their nodes; traces are paths.
World coordinates map to a fixed square canvas with a uniform scale and
the y axis pointing up; the mapping is written into a comment.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .model import Configuration, Network, NetworkError

CANVAS = 480.0
MARGIN = 24.0
NODE_SIZE = 7.0
TRACE_COLORS = ("#1f5fbf", "#bf3f1f", "#2f8f2f", "#8f2f8f")


class _Mapping:
    def __init__(self, points: np.ndarray):
        if len(points) == 0:
            lo, hi = np.zeros(2), np.ones(2)
        else:
            lo, hi = points.min(axis=0), points.max(axis=0)
        span = float(max(hi[0] - lo[0], hi[1] - lo[1]))
        self.scale = (CANVAS - 2 * MARGIN) / span if span > 0 else 1.0
        self.lo = lo
        self.hi = hi
        # centre the drawing
        used = (hi - lo) * self.scale
        self.offset = MARGIN + (CANVAS - 2 * MARGIN - used) / 2

    def __call__(self, p) -> tuple[float, float]:
        u = self.offset[0] + (p[0] - self.lo[0]) * self.scale
        v = CANVAS - (self.offset[1] + (p[1] - self.lo[1]) * self.scale)
        return round(float(u), 3), round(float(v), 3)

    def comment(self) -> str:
        return (
            f"canvas {CANVAS:g}x{CANVAS:g}; screen = offset + (world - ({self.lo[0]:.6g}, {self.lo[1]:.6g}))"
            f" * {self.scale:.6g}, y flipped; offset = ({self.offset[0]:.6g}, {self.offset[1]:.6g})"
        )


def _project(p, axes: tuple[int, int]) -> np.ndarray:
    return np.array([p[axes[0]], p[axes[1]]], dtype=float)


def _check_dimension(d: int, axes) -> tuple[int, int]:
    if axes is None:
        if d != 2:
            raise NetworkError(f"cannot draw {d}-dimensional data; project onto two axes (--project x,y)")
        return (0, 1)
    if len(axes) != 2 or any(not 0 <= a < d for a in axes):
        raise NetworkError(f"bad projection axes {axes} for dimension {d}")
    return tuple(axes)


def render_svg(
    net: Network | None = None,
    config: Configuration | None = None,
    traces: Sequence[np.ndarray] = (),
    axes: tuple[int, int] | None = None,
) -> str:
    """SVG text showing ``net`` placed by ``config`` and any polyline ``traces``."""
    d = net.dimension if net is not None else (np.asarray(traces[0]).shape[1] if len(traces) and len(traces[0]) else 2)
    axes = _check_dimension(d, axes)
    traces = [np.array([_project(p, axes) for p in t]).reshape(-1, 2) for t in traces]
    placed = {}
    if net is not None and config is not None:
        placed = {nid: _project(config[nid], axes) for nid in net.node_ids}
    pts = list(placed.values()) + [p for t in traces for p in t]
    mapping = _Mapping(np.array(pts).reshape(-1, 2))
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{CANVAS:g}" height="{CANVAS:g}" '
        f'viewBox="0 0 {CANVAS:g} {CANVAS:g}">',
        f"<!-- {mapping.comment()} -->",
        f'<rect x="0" y="0" width="{CANVAS:g}" height="{CANVAS:g}" fill="white"/>',
    ]
    for i, t in enumerate(traces):
        if len(t) == 0:
            continue
        path = " ".join(("M" if j == 0 else "L") + "{:g},{:g}".format(*mapping(p)) for j, p in enumerate(t))
        color = TRACE_COLORS[i % len(TRACE_COLORS)]
        out.append(f'<path d="{path}" fill="none" stroke="{color}" stroke-width="1.5"/>')
    if placed:
        for c in net.cords:
            coords = " ".join("{:g},{:g}".format(*mapping(placed[n])) for n in c.nodes)
            out.append(f'<polyline points="{coords}" fill="none" stroke="#333333" stroke-width="1"/>')
        ends = {c.nodes[0] for c in net.cords} | {c.nodes[-1] for c in net.cords}
        h = NODE_SIZE / 2
        for node in net.nodes:
            u, v = mapping(placed[node.id])
            fill = "black" if node.anchored else "white"
            if node.id in ends:
                out.append(
                    f'<rect x="{u - h:g}" y="{v - h:g}" width="{NODE_SIZE:g}" height="{NODE_SIZE:g}" '
                    f'fill="{fill}" stroke="black"><title>{node.id}</title></rect>'
                )
            else:
                out.append(f'<circle cx="{u:g}" cy="{v:g}" r="{h:g}" fill="{fill}" stroke="black"><title>{node.id}</title></circle>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
