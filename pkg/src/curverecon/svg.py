"""Standalone SVG rendering of planar points, graph edges and curves.

Output is a pure function of the input: fixed element order, fixed number
formatting, no timestamps.
"""
from __future__ import annotations

import numpy as np

from .curves import CurveModel
from .geom import GeometryError
from .io import atomic_write


def _f(x: float) -> str:
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def render_svg(points, edges=(), curve: CurveModel | None = None, size: int = 800,
               stroke: float = 1.0, point_radius: float = 2.5, margin: int = 20) -> str:
    P = np.asarray(points, dtype=np.float64)
    if P.ndim != 2 or P.shape[1] != 2:
        raise GeometryError(f"SVG output needs planar points, got shape {P.shape}")
    paths = []
    if curve is not None:
        span = float(np.ptp(P, axis=0).max()) if len(P) else 1.0
        step = max(span, 1e-9) / 2000.0
        for comp in curve.components:
            m = max(int(np.ceil(comp.length / step)), 8)
            t = np.linspace(0.0, comp.length, m + 1)
            paths.append((comp.point_at(t), comp.closed))
    allp = np.vstack([P] + [q for q, _ in paths]) if paths else P
    if len(allp) == 0:
        lo, hi = np.zeros(2), np.ones(2)
    else:
        lo, hi = allp.min(axis=0), allp.max(axis=0)
    scale = (size - 2 * margin) / max(float((hi - lo).max()), 1e-12)
    width = int(np.ceil((hi[0] - lo[0]) * scale)) + 2 * margin
    height = int(np.ceil((hi[1] - lo[1]) * scale)) + 2 * margin

    def xy(q):
        # flip y so the picture is upright
        return margin + (q[..., 0] - lo[0]) * scale, height - margin - (q[..., 1] - lo[1]) * scale

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">',
           f'<rect width="{width}" height="{height}" fill="white"/>']
    for q, closed in paths:
        X, Y = xy(q)
        d = "M" + " L".join(f"{_f(a)} {_f(b)}" for a, b in zip(X, Y)) + (" Z" if closed else "")
        out.append(f'<path d="{d}" fill="none" stroke="#9db4d6" stroke-width="{_f(stroke)}"/>')
    X, Y = xy(P)
    for i, j in sorted((min(a, b), max(a, b)) for a, b in edges):
        out.append(f'<line x1="{_f(X[i])}" y1="{_f(Y[i])}" x2="{_f(X[j])}" y2="{_f(Y[j])}" '
                   f'stroke="#c0392b" stroke-width="{_f(stroke)}"/>')
    for a, b in zip(X, Y):
        out.append(f'<circle cx="{_f(a)}" cy="{_f(b)}" r="{_f(point_radius)}" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(points, edges, curve: CurveModel | None, path, **opts) -> None:
    atomic_write(path, render_svg(points, edges, curve, **opts))
