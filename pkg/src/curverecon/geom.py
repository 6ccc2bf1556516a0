"""Dimension-generic geometric primitives.

Points are plain float64 numpy vectors.  The compatibility predicate decides
whether three samples can be consecutive along a curve sampled at density
``epsilon``; it is available in closed (angle) form and as a brute-force
ball-membership oracle used by the tests.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_EPSILON = 0.66


class GeometryError(ValueError):
    """Raised on degenerate or malformed geometric input."""


def as_point(p) -> np.ndarray:
    arr = np.asarray(p, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] < 2:
        raise GeometryError(f"point must be a vector of dimension >= 2, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise GeometryError("point coordinates must be finite")
    return arr


def _pair(p, q):
    p = as_point(p)
    q = as_point(q)
    if p.shape != q.shape:
        raise GeometryError(f"dimension mismatch: {p.shape[0]} vs {q.shape[0]}")
    return p, q


@dataclass(frozen=True)
class CompatParams:
    """Sampling parameter and the cosine threshold derived from it."""

    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        e = float(self.epsilon)
        if not (0.0 < e <= math.sqrt(2.0)):
            raise GeometryError(f"epsilon must lie in (0, sqrt 2], got {e}")
        object.__setattr__(self, "epsilon", e)

    @property
    def k(self) -> float:
        e = self.epsilon
        return e * math.sqrt(max(4.0 - e * e, 0.0)) / 2.0

    @property
    def base_angle(self) -> float:
        """arccos(k) in radians: the angle between ba and bx for x in X(a,b)."""
        return math.acos(min(self.k, 1.0))


def distance(p, q) -> float:
    p, q = _pair(p, q)
    return float(np.linalg.norm(p - q))


def _vec_angle(u: np.ndarray, v: np.ndarray) -> float:
    # Kahan's formulation; accurate near 0 and pi in any dimension
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    s = np.linalg.norm(u * nv - v * nu)
    c = np.linalg.norm(u * nv + v * nu)
    return 2.0 * math.atan2(s, c)


def angle(a, b, c) -> float:
    """Angle abc at vertex b, in radians."""
    a, b = _pair(a, b)
    _, c = _pair(b, c)
    u = a - b
    v = c - b
    if not np.any(u) or not np.any(v):
        raise GeometryError("angle undefined: a vertex coincides with b")
    return _vec_angle(u, v)


def angle_deg(a, b, c) -> float:
    return math.degrees(angle(a, b, c))


def xab_radius(a, b, params: CompatParams = CompatParams()) -> float:
    """Common distance from a and b of every point in X(a,b)."""
    a, b = _pair(a, b)
    dab = float(np.linalg.norm(a - b))
    if dab == 0.0:
        raise GeometryError("X(a,b) undefined for a == b")
    e = params.epsilon
    return dab / (e * math.sqrt(4.0 - e * e))


def _in_plane_normal(a, b, c):
    """Unit vector orthogonal to ab, in the plane of a, b, c, pointing to c."""
    axis = b - a
    axis = axis / np.linalg.norm(axis)
    mid = 0.5 * (a + b)
    w = (c - mid) - np.dot(c - mid, axis) * axis
    nw = np.linalg.norm(w)
    scale = max(np.linalg.norm(c - mid), np.linalg.norm(b - a))
    if nw <= 1e-14 * scale:
        raise GeometryError("points are collinear")
    return w / nw


def xab_witness(a, b, c, params: CompatParams = CompatParams()) -> np.ndarray:
    """The element of X(a,b) in the plane of a, b, c on c's side of line ab."""
    a, b = _pair(a, b)
    _, c = _pair(a, c)
    if not np.any(a - b) or not np.any(a - c) or not np.any(b - c):
        raise GeometryError("points must be pairwise distinct")
    n = _in_plane_normal(a, b, c)
    r = xab_radius(a, b, params)
    half = 0.5 * float(np.linalg.norm(b - a))
    h = math.sqrt(max(r * r - half * half, 0.0))
    return 0.5 * (a + b) + h * n


def compat_threshold(dab: float, dcb: float, params: CompatParams) -> float:
    """Smallest angle abc (radians, exclusive) for which (a,b,c) is compatible.

    A cosine argument above 1 means c is farther from b than the diameter of
    every witness ball, so that half of the condition holds for any angle;
    clamping the argument to 1 expresses exactly that.
    """
    k = params.k
    base = math.acos(min(k, 1.0))
    t1 = math.acos(min(k * dcb / dab, 1.0))
    t2 = math.acos(min(k * dab / dcb, 1.0))
    return base + max(t1, t2)


def is_compatible(a, b, c, params: CompatParams = CompatParams()) -> bool:
    a, b = _pair(a, b)
    _, c = _pair(a, c)
    u = a - b
    v = c - b
    dab = float(np.linalg.norm(u))
    dcb = float(np.linalg.norm(v))
    if dab == 0.0 or dcb == 0.0 or not np.any(a - c):
        raise GeometryError("points must be pairwise distinct")
    return _vec_angle(u, v) > compat_threshold(dab, dcb, params)


def compat_margin(a, b, c, params: CompatParams = CompatParams()) -> float:
    """Angle abc minus the compatibility threshold, in radians."""
    a = as_point(a)
    b = as_point(b)
    c = as_point(c)
    u = a - b
    v = c - b
    return _vec_angle(u, v) - compat_threshold(float(np.linalg.norm(u)), float(np.linalg.norm(v)), params)


def _witness_points(a, b, c, params, n_witness):
    """Discretisation of X(a,b): the in-plane pair in 2-D, a circle otherwise."""
    n1 = _in_plane_normal(a, b, c)
    r = xab_radius(a, b, params)
    half = 0.5 * float(np.linalg.norm(b - a))
    h = math.sqrt(max(r * r - half * half, 0.0))
    mid = 0.5 * (a + b)
    if a.shape[0] == 2:
        return np.stack([mid + h * n1, mid - h * n1])
    axis = (b - a) / np.linalg.norm(b - a)
    # any direction orthogonal to both the axis and n1
    basis = np.eye(a.shape[0])
    resid = basis - np.outer(basis @ axis, axis) - np.outer(basis @ n1, n1)
    n2 = resid[np.argmax(np.linalg.norm(resid, axis=1))]
    n2 = n2 / np.linalg.norm(n2)
    t = 2.0 * np.pi * np.arange(n_witness) / n_witness
    return mid + h * (np.cos(t)[:, None] * n1 + np.sin(t)[:, None] * n2)


def is_compatible_oracle(a, b, c, params: CompatParams = CompatParams(), n_witness: int = 256) -> bool:
    """Direct check of the ball conditions on a discretised X(a,b) and X(b,c)."""
    if n_witness < 2:
        raise GeometryError("n_witness must be >= 2")
    a, b = _pair(a, b)
    _, c = _pair(a, c)
    if not np.any(a - b) or not np.any(b - c) or not np.any(a - c):
        raise GeometryError("points must be pairwise distinct")
    xs = _witness_points(a, b, c, params, n_witness)
    rx = np.linalg.norm(xs - b, axis=1)
    if np.any(np.linalg.norm(xs - c, axis=1) <= rx):
        return False
    ys = _witness_points(c, b, a, params, n_witness)
    ry = np.linalg.norm(ys - b, axis=1)
    if np.any(np.linalg.norm(ys - a, axis=1) <= ry):
        return False
    return True


def compatible_batch(a, b, c, params: CompatParams = CompatParams()) -> np.ndarray:
    """Vectorised closed form over rows of (N, d) arrays."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    return compat_margin_batch(a, b, c, params) > 0.0


def compat_margin_batch(a, b, c, params: CompatParams = CompatParams()) -> np.ndarray:
    u = a - b
    v = c - b
    nu = np.linalg.norm(u, axis=-1)
    nv = np.linalg.norm(v, axis=-1)
    s = np.linalg.norm(u * nv[..., None] - v * nu[..., None], axis=-1)
    cc = np.linalg.norm(u * nv[..., None] + v * nu[..., None], axis=-1)
    ang = 2.0 * np.arctan2(s, cc)
    k = params.k
    base = math.acos(min(k, 1.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        t1 = np.arccos(np.minimum(k * nv / nu, 1.0))
        t2 = np.arccos(np.minimum(k * nu / nv, 1.0))
    return ang - (base + np.maximum(t1, t2))
