"""Piecewise-analytic planar curves and their local feature size.

A component is a cyclic list of segments (line segments, circular arcs, or a
full ellipse) parameterised by arc length.  The local feature size comes from
a closed form when the family has one; otherwise from a medial-axis point
cloud built with the shrinking-ball iteration over a dense discretisation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.spatial import cKDTree

from .geom import GeometryError

CLOSE_TOL = 1e-12
C1_TOL = 1e-9


# ---------------------------------------------------------------- segments

@dataclass(frozen=True)
class Line:
    start: tuple
    end: tuple

    @property
    def length(self) -> float:
        return math.dist(self.start, self.end)

    def point(self, s):
        s = np.asarray(s, dtype=np.float64)
        p0 = np.asarray(self.start, dtype=np.float64)
        d = (np.asarray(self.end, dtype=np.float64) - p0) / self.length
        return p0 + s[..., None] * d

    def tangent(self, s):
        s = np.asarray(s, dtype=np.float64)
        d = (np.asarray(self.end, dtype=np.float64) - np.asarray(self.start, dtype=np.float64)) / self.length
        return np.broadcast_to(d, s.shape + (2,)).copy()

    def project(self, p):
        p = np.asarray(p, dtype=np.float64)
        p0 = np.asarray(self.start, dtype=np.float64)
        d = (np.asarray(self.end, dtype=np.float64) - p0) / self.length
        s = np.clip((p - p0) @ d, 0.0, self.length)
        return s, np.linalg.norm(self.point(s) - p, axis=-1)

    def to_json(self) -> dict:
        return {"type": "segment", "start": list(self.start), "end": list(self.end)}


@dataclass(frozen=True)
class Arc:
    """Circular arc from ``start_angle`` over ``sweep`` radians (signed)."""

    center: tuple
    radius: float
    start_angle: float
    sweep: float

    def __post_init__(self):
        if not self.radius > 0:
            raise GeometryError(f"arc radius must be positive, got {self.radius}")
        if self.sweep == 0:
            raise GeometryError("arc sweep must be nonzero")

    @property
    def length(self) -> float:
        return self.radius * abs(self.sweep)

    def _theta(self, s):
        return self.start_angle + math.copysign(1.0, self.sweep) * np.asarray(s, dtype=np.float64) / self.radius

    def point(self, s):
        th = self._theta(s)
        return np.stack([self.center[0] + self.radius * np.cos(th),
                         self.center[1] + self.radius * np.sin(th)], axis=-1)

    def tangent(self, s):
        th = self._theta(s)
        sg = math.copysign(1.0, self.sweep)
        return np.stack([-sg * np.sin(th), sg * np.cos(th)], axis=-1)

    def project(self, p):
        p = np.asarray(p, dtype=np.float64)
        sg = math.copysign(1.0, self.sweep)
        phi = np.arctan2(p[..., 1] - self.center[1], p[..., 0] - self.center[0])
        rel = np.mod(sg * (phi - self.start_angle), 2.0 * math.pi)
        span = abs(self.sweep)
        # outside the sweep: snap to whichever end is angularly nearer
        over = rel > span
        to_start = (2.0 * math.pi - rel) < (rel - span)
        rel = np.where(over, np.where(to_start, 0.0, span), rel)
        s = rel * self.radius
        return s, np.linalg.norm(self.point(s) - p, axis=-1)

    def to_json(self) -> dict:
        return {"type": "arc", "center": list(self.center), "radius": self.radius,
                "start_angle": self.start_angle, "sweep": self.sweep}


_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


@dataclass(frozen=True)
class Ellipse:
    """Full axis-aligned ellipse, counter-clockwise from (cx + a, cy)."""

    center: tuple
    a: float
    b: float
    nodes: int = 4096

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise GeometryError("ellipse semi-axes must be positive")

    def _speed(self, th):
        return np.hypot(self.a * np.sin(th), self.b * np.cos(th))

    def _integral(self, t0, t1):
        mid = 0.5 * (t0 + t1)
        half = 0.5 * (t1 - t0)
        th = mid[..., None] + half[..., None] * _GL_X
        return half * (self._speed(th) @ _GL_W)

    @cached_property
    def _table(self):
        th = np.linspace(0.0, 2.0 * math.pi, self.nodes + 1)
        s = np.concatenate([[0.0], np.cumsum(self._integral(th[:-1], th[1:]))])
        return th, s

    @property
    def length(self) -> float:
        return float(self._table[1][-1])

    def _arclen(self, th):
        nodes, s = self._table
        i = np.clip(np.searchsorted(nodes, th, side="right") - 1, 0, self.nodes - 1)
        return s[i] + self._integral(nodes[i], th)

    def theta(self, s):
        s = np.asarray(s, dtype=np.float64)
        nodes, table = self._table
        th = np.interp(s, table, nodes)
        for _ in range(3):
            th = th - (self._arclen(th) - s) / self._speed(th)
        return th

    def point(self, s):
        th = self.theta(s)
        return np.stack([self.center[0] + self.a * np.cos(th), self.center[1] + self.b * np.sin(th)], axis=-1)

    def tangent(self, s):
        th = self.theta(s)
        v = np.stack([-self.a * np.sin(th), self.b * np.cos(th)], axis=-1)
        return v / np.linalg.norm(v, axis=-1, keepdims=True)

    def project(self, p):
        p = np.asarray(p, dtype=np.float64)
        flat = p.reshape(-1, 2)
        nodes = np.linspace(0.0, 2.0 * math.pi, 721)
        ring = np.stack([self.center[0] + self.a * np.cos(nodes), self.center[1] + self.b * np.sin(nodes)], axis=-1)
        th = nodes[np.argmin(((flat[:, None, :] - ring[None]) ** 2).sum(-1), axis=1)]
        x = flat[:, 0] - self.center[0]
        y = flat[:, 1] - self.center[1]
        for _ in range(30):
            c, s_ = np.cos(th), np.sin(th)
            ex, ey = self.a * c - x, self.b * s_ - y
            g = -ex * self.a * s_ + ey * self.b * c
            h = (self.a * s_) ** 2 + (self.b * c) ** 2 - ex * self.a * c - ey * self.b * s_
            th = th - g / np.where(np.abs(h) > 1e-300, h, 1e-300)
        th = np.mod(th, 2.0 * math.pi)
        s = self._arclen(th)
        q = np.stack([self.center[0] + self.a * np.cos(th), self.center[1] + self.b * np.sin(th)], axis=-1)
        dist = np.linalg.norm(q - flat, axis=-1)
        return s.reshape(p.shape[:-1]), dist.reshape(p.shape[:-1])

    def to_json(self) -> dict:
        return {"type": "ellipse", "center": list(self.center), "a": self.a, "b": self.b}


class ExpBend:
    """Conformal (sign=+1) or anti-conformal (sign=-1) bending of the plane
    onto an annulus: (x, y) -> scale * R * exp(sign * y / R) * (sin(x/R), cos(x/R)).

    Locally it is a similarity, so sampling ratios are distorted only by the
    variation of the scale factor across a feature.
    """

    def __init__(self, R: float, sign: int = 1, scale: float = 1.0):
        if not R > 0:
            raise GeometryError("bending radius must be positive")
        self.R, self.sign, self.scale = float(R), int(sign), float(scale)

    def __call__(self, P):
        P = np.asarray(P, dtype=np.float64)
        rad = self.scale * self.R * np.exp(self.sign * P[..., 1] / self.R)
        th = P[..., 0] / self.R
        return np.stack([rad * np.sin(th), rad * np.cos(th)], axis=-1)

    def stretch(self, P):
        return self.scale * np.exp(self.sign * np.asarray(P)[..., 1] / self.R)

    def push_tangent(self, P, T):
        P = np.asarray(P, dtype=np.float64)
        th = P[..., 0] / self.R
        c, s_ = np.cos(th), np.sin(th)
        tx, ty = T[..., 0], T[..., 1]
        # columns of the Jacobian up to the common stretch factor
        v = np.stack([c * tx + self.sign * s_ * ty, -s_ * tx + self.sign * c * ty], axis=-1)
        return v / np.linalg.norm(v, axis=-1, keepdims=True)

    def to_json(self) -> dict:
        return {"R": self.R, "sign": self.sign, "scale": self.scale}


@dataclass(frozen=True)
class Mapped:
    """Image of a segment under a smooth bending map, re-parameterised by
    arc length."""

    base: object
    bend: ExpBend = field(compare=False)
    nodes: int = 64

    def _speed(self, u):
        return self.bend.stretch(self.base.point(u))

    def _integral(self, u0, u1):
        mid = 0.5 * (u0 + u1)
        half = 0.5 * (u1 - u0)
        u = mid[..., None] + half[..., None] * _GL_X
        return half * (self._speed(u) @ _GL_W)

    @cached_property
    def _table(self):
        u = np.linspace(0.0, self.base.length, self.nodes + 1)
        s = np.concatenate([[0.0], np.cumsum(self._integral(u[:-1], u[1:]))])
        return u, s

    @property
    def length(self) -> float:
        return float(self._table[1][-1])

    def _arclen(self, u):
        nodes, s = self._table
        i = np.clip(np.searchsorted(nodes, u, side="right") - 1, 0, self.nodes - 1)
        return s[i] + self._integral(nodes[i], u)

    def _u(self, s):
        s = np.asarray(s, dtype=np.float64)
        nodes, table = self._table
        u = np.interp(s, table, nodes)
        for _ in range(4):
            u = np.clip(u - (self._arclen(u) - s) / self._speed(u), 0.0, self.base.length)
        # ends map to ends exactly so joins stay closed
        return np.where(s <= 0.0, 0.0, np.where(s >= table[-1], self.base.length, u))

    def point(self, s):
        return self.bend(self.base.point(self._u(s)))

    def tangent(self, s):
        u = self._u(s)
        return self.bend.push_tangent(self.base.point(u), self.base.tangent(u))

    def project(self, p):
        p = np.asarray(p, dtype=np.float64)
        flat = p.reshape(-1, 2)
        m = 512
        grid = np.linspace(0.0, self.length, m + 1)
        ring = self.point(grid)
        j = np.argmin(((flat[:, None, :] - ring[None]) ** 2).sum(-1), axis=1)
        lo = grid[np.maximum(j - 1, 0)]
        hi = grid[np.minimum(j + 1, m)]
        g = (math.sqrt(5.0) - 1.0) / 2.0
        for _ in range(60):
            a = hi - g * (hi - lo)
            b = lo + g * (hi - lo)
            fa = np.linalg.norm(self.point(a) - flat, axis=-1)
            fb = np.linalg.norm(self.point(b) - flat, axis=-1)
            lo = np.where(fa <= fb, lo, a)
            hi = np.where(fa <= fb, b, hi)
        s = 0.5 * (lo + hi)
        d = np.linalg.norm(self.point(s) - flat, axis=-1)
        return s.reshape(p.shape[:-1]), d.reshape(p.shape[:-1])

    def to_json(self) -> dict:
        return {"type": "bent", "base": self.base.to_json(), "bend": self.bend.to_json()}


@dataclass(frozen=True)
class Rotated:
    """A segment rotated about the origin; congruent copies share the base's
    arc-length tables."""

    base: object
    angle: float

    @cached_property
    def _rot(self):
        c, s_ = math.cos(self.angle), math.sin(self.angle)
        return np.array([[c, -s_], [s_, c]])

    @property
    def length(self) -> float:
        return self.base.length

    def point(self, s):
        return self.base.point(s) @ self._rot.T

    def tangent(self, s):
        return self.base.tangent(s) @ self._rot.T

    def project(self, p):
        return self.base.project(np.asarray(p, dtype=np.float64) @ self._rot)

    def to_json(self) -> dict:
        return {"type": "rotated", "base": self.base.to_json(), "angle": self.angle}


def segment_from_json(d: dict):
    t = d.get("type")
    if t == "segment":
        return Line(tuple(map(float, d["start"])), tuple(map(float, d["end"])))
    if t == "arc":
        return Arc(tuple(map(float, d["center"])), float(d["radius"]), float(d["start_angle"]), float(d["sweep"]))
    if t == "ellipse":
        return Ellipse(tuple(map(float, d["center"])), float(d["a"]), float(d["b"]))
    if t == "rotated":
        return Rotated(segment_from_json(d["base"]), float(d["angle"]))
    if t == "bent":
        b = d["bend"]
        return Mapped(segment_from_json(d["base"]), ExpBend(float(b["R"]), int(b["sign"]), float(b.get("scale", 1.0))))
    raise GeometryError(f"unknown segment type {t!r}")


# ---------------------------------------------------------------- components

@dataclass(frozen=True)
class Component:
    segments: tuple
    closed: bool = True
    # skip the join checks for copies of an already checked template
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        segs = tuple(self.segments)
        if not segs:
            raise GeometryError("a component needs at least one segment")
        object.__setattr__(self, "segments", segs)
        if not self.check:
            return
        pairs = list(zip(segs[:-1], segs[1:]))
        if self.closed:
            pairs.append((segs[-1], segs[0]))
        for k, (s1, s2) in enumerate(pairs):
            e = s1.point(np.array(s1.length))
            b = s2.point(np.array(0.0))
            gap = float(np.linalg.norm(e - b))
            scale = max(1.0, float(np.max(np.abs(b))))
            if gap > CLOSE_TOL * scale * 1e3 and gap > 1e-12:
                last = self.closed and k == len(pairs) - 1
                what = "component does not close" if last else f"segments {k} and {k + 1} do not meet"
                raise GeometryError(f"{what}: gap {gap:.3e}")
            t1 = s1.tangent(np.array(s1.length))
            t2 = s2.tangent(np.array(0.0))
            turn = abs(math.atan2(t1[0] * t2[1] - t1[1] * t2[0], float(t1 @ t2)))
            if turn > C1_TOL:
                raise GeometryError(f"tangent jump of {turn:.3e} rad at join {k}")

    @cached_property
    def offsets(self) -> np.ndarray:
        return np.concatenate([[0.0], np.cumsum([s.length for s in self.segments])])

    @property
    def length(self) -> float:
        return float(self.offsets[-1])

    def _split(self, t):
        t = np.asarray(t, dtype=np.float64)
        if self.closed:
            t = np.mod(t, self.length)
        idx = np.clip(np.searchsorted(self.offsets, t, side="right") - 1, 0, len(self.segments) - 1)
        return t, idx

    def _eval(self, t, what):
        t, idx = self._split(t)
        out = np.empty(t.shape + (2,))
        for k in np.unique(idx):
            m = idx == k
            out[m] = getattr(self.segments[k], what)(t[m] - self.offsets[k])
        return out

    def point_at(self, t):
        return self._eval(t, "point")

    def tangent_at(self, t):
        return self._eval(t, "tangent")

    def normal_at(self, t):
        tg = self.tangent_at(t)
        return np.stack([-tg[..., 1], tg[..., 0]], axis=-1)

    def project(self, p):
        """Arc-length parameter of the nearest curve point, and its distance."""
        p = np.asarray(p, dtype=np.float64)
        best_t = np.zeros(p.shape[:-1])
        best_d = np.full(p.shape[:-1], np.inf)
        for k, seg in enumerate(self.segments):
            s, d = seg.project(p)
            better = d < best_d
            best_t = np.where(better, s + self.offsets[k], best_t)
            best_d = np.where(better, d, best_d)
        if self.closed:
            best_t = np.mod(best_t, self.length)
        return best_t, best_d

    def to_json(self) -> dict:
        return {"closed": self.closed, "segments": [s.to_json() for s in self.segments]}


# ---------------------------------------------------------------- lfs models

def _lfs_circle(spec):
    r = float(spec["radius"])
    return lambda P, comp: np.full(len(P), r)


def _lfs_concentric(spec):
    c = np.asarray(spec["center"], dtype=np.float64)
    r1, r2 = sorted(map(float, spec["radii"]))
    gap = 0.5 * (r2 - r1)

    def f(P, comp):
        rho = np.linalg.norm(np.asarray(P) - c, axis=-1)
        # nearest medial point: the middle circle, or the common centre
        return np.minimum(np.abs(rho - 0.5 * (r1 + r2)), rho)
    del gap
    return f


def _lfs_ellipse(spec):
    c = np.asarray(spec["center"], dtype=np.float64)
    a, b = float(spec["a"]), float(spec["b"])

    def f(P, comp):
        q = np.asarray(P) - c
        if a >= b:
            h = (a * a - b * b) / a
            return np.hypot(np.maximum(np.abs(q[:, 0]) - h, 0.0), q[:, 1])
        h = (b * b - a * a) / b
        return np.hypot(q[:, 0], np.maximum(np.abs(q[:, 1]) - h, 0.0))
    return f


def _lfs_distance_to_point(spec):
    b = np.asarray(spec["point"], dtype=np.float64)
    return lambda P, comp: np.linalg.norm(np.asarray(P) - b, axis=-1)


LFS_MODELS = {
    "circle": _lfs_circle,
    "concentric": _lfs_concentric,
    "ellipse": _lfs_ellipse,
    "distance-to-point": _lfs_distance_to_point,
}


# ---------------------------------------------------------------- curve model

@dataclass(frozen=True)
class CurveModel:
    components: tuple
    lfs_model: dict | None = None  # {"type": ..., params}; None means numeric
    # parameters that rebuild a generated curve; keeps large exports compact
    generator: dict | None = field(default=None, compare=False)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if self.lfs_model is not None and self.lfs_model.get("type") not in LFS_MODELS:
            raise GeometryError(f"unknown lfs model {self.lfs_model.get('type')!r}")

    @property
    def is_closed(self) -> bool:
        return all(c.closed for c in self.components)

    @property
    def lengths(self) -> np.ndarray:
        return np.array([c.length for c in self.components])

    def point_at(self, comp: int, t):
        return self.components[comp].point_at(t)

    def bbox_diameter(self) -> float:
        P, _, _ = self.discretize(min(self.lengths) / 64.0)
        return float(np.linalg.norm(P.max(axis=0) - P.min(axis=0)))

    def discretize(self, step: float):
        """Equally spaced points per component with spacing <= step.

        Returns (points, component ids, parameters)."""
        if not step > 0:
            raise GeometryError("density must be positive")
        pts, cid, par = [], [], []
        for k, c in enumerate(self.components):
            m = max(int(math.ceil(c.length / step)), 3)
            if c.closed:
                t = np.arange(m) * (c.length / m)
            else:
                t = np.linspace(0.0, c.length, m + 1)
            pts.append(c.point_at(t))
            cid.append(np.full(len(t), k))
            par.append(t)
        return np.concatenate(pts), np.concatenate(cid), np.concatenate(par)

    def project(self, P):
        """Nearest (component, parameter, distance) for each point."""
        P = np.atleast_2d(np.asarray(P, dtype=np.float64))
        best = np.full(len(P), np.inf)
        comp = np.zeros(len(P), dtype=np.int64)
        par = np.zeros(len(P))
        for k, c in enumerate(self.components):
            t, d = c.project(P)
            better = d < best
            best = np.where(better, d, best)
            comp = np.where(better, k, comp)
            par = np.where(better, t, par)
        return comp, par, best

    # ------------------------------------------------------------ lfs

    def analytic_lfs(self, P, comp=None):
        if self.lfs_model is None:
            return None
        return LFS_MODELS[self.lfs_model["type"]](self.lfs_model)(np.atleast_2d(P), comp)

    def medial_cloud(self, density: float) -> np.ndarray:
        key = ("medial", float(density))
        if key not in self._cache:
            self._cache[key] = _medial_cloud(self, density)
        return self._cache[key]

    def lfs(self, P, density: float | None = None, comp=None) -> np.ndarray:
        """Local feature size at curve points: closed form when available,
        otherwise the distance to the numerically sampled medial axis."""
        P = np.atleast_2d(np.asarray(P, dtype=np.float64))
        exact = self.analytic_lfs(P, comp)
        if exact is not None:
            return exact
        if density is None:
            density = 1e-3 * float(self.lengths.min())
        key = ("medial-tree", float(density))
        if key not in self._cache:
            self._cache[key] = cKDTree(self.medial_cloud(density))
        d, _ = self._cache[key].query(P)
        return d

    def to_json(self, expand: bool = False) -> dict:
        if self.generator is not None and not expand:
            return {"generator": dict(self.generator)}
        out = {"components": [c.to_json() for c in self.components]}
        if self.lfs_model is not None:
            out["lfs"] = dict(self.lfs_model)
        return out


def _query_within(tree, C, bound):
    """Two nearest neighbours of each row of C, searched only out to its own
    bound (misses come back as inf).  Queries are grouped into bands of
    similar bound so the scalar cut-off still prunes the search."""
    dd = np.full((len(C), 2), np.inf)
    jj = np.full((len(C), 2), tree.n, dtype=np.int64)
    band = np.ceil(4.0 * np.log2(np.maximum(bound, 1e-300))).astype(np.int64)
    for b in np.unique(band):
        m = band == b
        d, j = tree.query(C[m], k=2, distance_upper_bound=float(bound[m].max()) * (1.0 + 1e-9))
        dd[m], jj[m] = d, j
    return dd, jj


def _tangent_radius(P, N, Y):
    """Radius of the ball tangent at P (centre on the +N side) through Y."""
    w = Y - P
    wn = np.einsum("...k,...k->...", w, N)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(wn > 0.0, np.einsum("...k,...k->...", w, w) / (2.0 * wn), np.inf)


def _shrink(P, N, src, tree, t, tmax):
    """Shrink tangent balls at P[src] (normals N[src]) until empty of the
    tree's points.  Returns radii and the index of the limiting point."""
    t = t.copy()
    lim = np.full(len(src), -1, dtype=np.int64)
    active = np.arange(len(src))
    for _ in range(200):
        if len(active) == 0:
            break
        ps, ns = P[src[active]], N[src[active]]
        c = ps + t[active, None] * ns
        dd, jj = _query_within(tree, c, t[active])
        jj = np.minimum(jj, tree.n - 1)
        Y = tree.data[jj]
        # skip the tangency point itself
        own = np.all(Y[:, 0] == ps, axis=1)
        y = np.where(own[:, None], Y[:, 1], Y[:, 0])
        j = np.where(own, jj[:, 1], jj[:, 0])
        dist = np.where(own, dd[:, 1], dd[:, 0])
        tnew = _tangent_radius(ps, ns, y)
        shrink = (dist < t[active] * (1.0 - 1e-12)) & (tnew < t[active])
        t[active[shrink]] = tnew[shrink]
        lim[active[shrink]] = j[shrink]
        active = active[shrink]
    return np.minimum(t, tmax), lim


def _medial_cloud(curve: CurveModel, density: float) -> np.ndarray:
    """Medial-axis sample: for each dense point and each side, shrink a
    tangent ball until it is empty of the other dense points.

    A coarse pass over every 8th point finds, for each ball, the point that
    limits it; the exact tangent radius through that witness is an upper
    bound for nearby fine balls, so the fine pass starts almost converged.
    """
    P, cid, par = curve.discretize(density)
    N = np.concatenate([curve.components[k].normal_at(par[cid == k]) for k in range(len(curve.components))])
    tree = cKDTree(P)
    span = float(np.linalg.norm(P.max(axis=0) - P.min(axis=0)))
    tmax = 4.0 * span
    n = len(P)
    stride = 8
    coarse = np.arange(0, n, stride)
    ctree = cKDTree(P[coarse])
    # a tangent ball at p touching y has radius |y-p|^2 / (2 (y-p).n); the
    # nearest few neighbours give a tight starting radius
    _, knn = tree.query(P, k=min(16, n))
    cloud = []
    for side in (1.0, -1.0):
        Ns = side * N
        t0 = _tangent_radius(P[:, None, :], Ns[:, None, :], P[knn]).min(axis=1)
        t0 = np.minimum(t0, tmax)
        tc, limc = _shrink(P, Ns, coarse, ctree, t0[coarse], tmax)
        wit = np.where(limc >= 0, coarse[np.maximum(limc, 0)], -1)
        # witnesses of the two coarse sources around each fine point
        k0 = np.minimum(np.arange(n) // stride, len(coarse) - 1)
        t = t0.copy()
        for k in (k0, np.minimum(k0 + 1, len(coarse) - 1)):
            w = wit[k]
            ok = w >= 0
            cand = np.full(n, np.inf)
            cand[ok] = _tangent_radius(P[ok], Ns[ok], P[w[ok]])
            t = np.minimum(t, cand)
        t, _ = _shrink(P, Ns, np.arange(n), tree, t, tmax)
        found = t < tmax
        cloud.append(P[found] + t[found, None] * Ns[found])
    cloud = np.concatenate(cloud)
    if len(cloud) == 0:
        raise GeometryError("no medial axis found; is the curve closed?")
    return cloud


# ---------------------------------------------------------------- constructors

def circle(center=(0.0, 0.0), radius=1.0) -> CurveModel:
    seg = Arc(tuple(map(float, center)), float(radius), 0.0, 2.0 * math.pi)
    return CurveModel((Component((seg,)),), {"type": "circle", "center": list(map(float, center)), "radius": float(radius)})


def concentric(center=(0.0, 0.0), radii=(1.0, 3.0)) -> CurveModel:
    r1, r2 = sorted(map(float, radii))
    if not (0 < r1 < r2):
        raise GeometryError("concentric circles need 0 < r1 < r2")
    comps = tuple(Component((Arc(tuple(map(float, center)), r, 0.0, 2.0 * math.pi),)) for r in (r1, r2))
    return CurveModel(comps, {"type": "concentric", "center": list(map(float, center)), "radii": [r1, r2]})


def ellipse(center=(0.0, 0.0), a=2.0, b=1.0) -> CurveModel:
    e = Ellipse(tuple(map(float, center)), float(a), float(b))
    return CurveModel((Component((e,)),), {"type": "ellipse", "center": list(map(float, center)), "a": float(a), "b": float(b)})


def arc_chain(segments, closed: bool = True) -> CurveModel:
    return CurveModel((Component(tuple(segments), closed),))


def hook(h: float = 0.05) -> CurveModel:
    """Unit stem from (0,0) to (1,0) ending in a small downward hook of
    radius h; its local feature size is idealised as the distance to (1,0)."""
    if not h > 0:
        raise GeometryError("hook scale must be positive")
    stem = Line((0.0, 0.0), (1.0, 0.0))
    tip = Arc((1.0, -h), h, math.pi / 2.0, -math.radians(40.0))
    return CurveModel((Component((stem, tip), closed=False),), {"type": "distance-to-point", "point": [1.0, 0.0]})


def make_curve(spec) -> CurveModel:
    """Build a curve from a dict: a named family or a component list."""
    if isinstance(spec, CurveModel):
        return spec
    if "generator" in spec:
        from .gadget import curve_from_generator
        return curve_from_generator(spec["generator"])
    if "components" in spec:
        comps = tuple(Component(tuple(segment_from_json(s) for s in c["segments"]), bool(c.get("closed", True)))
                      for c in spec["components"])
        return CurveModel(comps, spec.get("lfs"))
    kind = spec.get("type")
    if kind == "circle":
        if not float(spec.get("radius", 1.0)) > 0:
            raise GeometryError("circle radius must be positive")
        return circle(spec.get("center", (0.0, 0.0)), spec.get("radius", 1.0))
    if kind == "ellipse":
        return ellipse(spec.get("center", (0.0, 0.0)), spec.get("a", 2.0), spec.get("b", 1.0))
    if kind in ("concentric", "parallel_lines"):
        return concentric(spec.get("center", (0.0, 0.0)), spec.get("radii", (1.0, 3.0)))
    if kind == "hook":
        return hook(spec.get("h", 0.05))
    if kind == "arc_chain":
        return arc_chain([segment_from_json(s) for s in spec["segments"]], bool(spec.get("closed", True)))
    raise GeometryError(f"unknown curve type {kind!r}")


def lfs_numeric(curve: CurveModel, p, density: float) -> float:
    """Local feature size at a curve point (closed form when available)."""
    p = np.asarray(p, dtype=np.float64)
    _, _, d = curve.project(p[None, :])
    if d[0] > 1e-6 * max(1.0, float(np.max(np.abs(p)))):
        raise GeometryError(f"point is not on the curve (distance {d[0]:.3e})")
    return float(curve.lfs(p[None, :], density)[0])
