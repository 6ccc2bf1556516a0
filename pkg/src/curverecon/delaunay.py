"""2-D Delaunay triangulation by incremental Bowyer-Watson insertion.

The triangulation is kept closed by ghost triangles sharing a vertex at
infinity, so hull growth needs no special case.  Points are inserted in a
randomised Hilbert order and located by a visibility walk from the last
created triangle.  Cocircular ties are broken by a symbolic perturbation
that lifts lower-indexed points further, which makes the result unique and
independent of the insertion order.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .geom import GeometryError
from .predicates import incircle_unchecked, orient2d

INF = -1


@dataclass(frozen=True)
class Triangulation2D:
    points: np.ndarray
    triangles: np.ndarray  # (m, 3) counter-clockwise, smallest index first, sorted
    edges: frozenset = field(repr=False)

    @property
    def n(self) -> int:
        return int(self.points.shape[0])

    def adjacency(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR (indptr, indices) of the 1-skeleton, neighbours sorted."""
        n = self.n
        if not self.edges:
            return np.zeros(n + 1, dtype=np.int32), np.zeros(0, dtype=np.int32)
        e = np.array(sorted(self.edges), dtype=np.int64)
        both = np.concatenate([e, e[:, ::-1]])
        both = both[np.lexsort((both[:, 1], both[:, 0]))]
        indptr = np.zeros(n + 1, dtype=np.int32)
        np.add.at(indptr, both[:, 0] + 1, 1)
        indptr = np.cumsum(indptr).astype(np.int32)
        return indptr, both[:, 1].astype(np.int32)


def _check_input(points) -> np.ndarray:
    P = np.ascontiguousarray(points, dtype=np.float64)
    if P.ndim != 2 or P.shape[1] != 2:
        raise GeometryError(f"triangulation needs an (n, 2) array, got shape {P.shape}")
    if P.shape[0] < 3:
        raise GeometryError("triangulation needs at least 3 points")
    if not np.all(np.isfinite(P)):
        raise GeometryError("point coordinates must be finite")
    check_duplicates(P)
    return P


def check_duplicates(P: np.ndarray) -> None:
    order = np.lexsort(P.T[::-1])
    s = P[order]
    same = np.all(s[1:] == s[:-1], axis=1)
    if np.any(same):
        j = int(np.argmax(same))
        i1, i2 = sorted((int(order[j]), int(order[j + 1])))
        raise GeometryError(f"duplicate points at indices {i1} and {i2}")


def _hilbert_keys(P: np.ndarray, bits: int = 16) -> np.ndarray:
    lo = P.min(axis=0)
    span = float(np.max(P.max(axis=0) - lo)) or 1.0
    side = (1 << bits) - 1
    q = np.floor((P - lo) / span * side).astype(np.int64)
    x, y = q[:, 0].copy(), q[:, 1].copy()
    d = np.zeros(len(P), dtype=np.int64)
    s = 1 << (bits - 1)
    while s > 0:
        rx = (x & s) > 0
        ry = (y & s) > 0
        d += s * s * ((3 * rx) ^ ry)
        # rotate the quadrant
        flip = ~ry
        swap_x = flip & rx
        x = np.where(swap_x, side - x, x)
        y = np.where(swap_x, side - y, y)
        x, y = np.where(flip, y, x), np.where(flip, x, y)
        s >>= 1
    return d


def insertion_order(P: np.ndarray, seed: int = 0) -> np.ndarray:
    """Biased randomised rounds, each sorted along a Hilbert curve."""
    n = len(P)
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    keys = _hilbert_keys(P)
    out = []
    start = 0
    size = min(n, 64)
    while start < n:
        chunk = perm[start:start + size]
        out.append(chunk[np.argsort(keys[chunk], kind="stable")])
        start += size
        size *= 2
    return np.concatenate(out).astype(np.int32)


class _PyBW:
    """Pure-Python twin of the compiled insertion loop."""

    def __init__(self, P: np.ndarray):
        self.pts = [(float(x), float(y)) for x, y in P]
        self.tv: list[int] = []
        self.tn: list[int] = []
        self.alive: list[bool] = []
        self.free: list[int] = []
        self.rng = 12345

    def orient(self, i, j, k):
        return orient2d(self.pts[i], self.pts[j], self.pts[k])

    def incircle_sos(self, a, b, c, p):
        pts = self.pts
        s = incircle_unchecked(pts[a], pts[b], pts[c], pts[p])
        if s:
            return s
        m = min(a, b, c, p)
        if m == p:
            return -1
        if m == a:
            return self.orient(p, b, c)
        if m == b:
            return -self.orient(p, a, c)
        return self.orient(p, a, b)

    def new_tri(self, a, b, c):
        if self.free:
            t = self.free.pop()
            self.tv[3 * t:3 * t + 3] = [a, b, c]
            self.alive[t] = True
        else:
            t = len(self.alive)
            self.tv += [a, b, c]
            self.tn += [-1, -1, -1]
            self.alive.append(True)
        return t

    def is_ghost(self, t):
        return min(self.tv[3 * t:3 * t + 3]) < 0

    def conflict(self, t, p):
        a, b, c = self.tv[3 * t:3 * t + 3]
        if a < 0 or b < 0 or c < 0:
            u, v = (b, c) if a < 0 else ((c, a) if b < 0 else (a, b))
            o = self.orient(u, v, p)
            if o:
                return o > 0
            (px, py), (ux, uy), (vx, vy) = self.pts[p], self.pts[u], self.pts[v]
            dx2, dy2 = vx - ux, vy - uy
            if (px - ux) * dx2 + (py - uy) * dy2 <= 0.0:
                return False
            return ((px - vx) * -dx2 + (py - vy) * -dy2) > 0.0
        return self.incircle_sos(a, b, c, p) > 0

    def locate(self, t, p):
        tv, tn = self.tv, self.tn
        if self.is_ghost(t):
            for i in range(3):
                if tv[3 * t + i] < 0:
                    t = tn[3 * t + i]
                    break
        while True:
            if self.is_ghost(t):
                return t
            self.rng = (self.rng * 1103515245 + 12345) & 0xFFFFFFFF
            off = (self.rng >> 16) % 3
            for j in range(3):
                i = (j + off) % 3
                if self.orient(tv[3 * t + (i + 1) % 3], tv[3 * t + (i + 2) % 3], p) < 0:
                    t = tn[3 * t + i]
                    break
            else:
                return t

    def insert(self, p, seed):
        tv, tn = self.tv, self.tn
        verdict = {seed: True}
        cavity = [seed]
        boundary = []
        head = 0
        while head < len(cavity):
            t = cavity[head]
            head += 1
            for i in range(3):
                o = tn[3 * t + i]
                if o not in verdict:
                    verdict[o] = self.conflict(o, p)
                    if verdict[o]:
                        cavity.append(o)
                if not verdict[o]:
                    j = tn[3 * o:3 * o + 3].index(t)
                    boundary.append((tv[3 * t + (i + 1) % 3], tv[3 * t + (i + 2) % 3], o, j))
        for t in cavity:
            self.alive[t] = False
            self.free.append(t)
        start, end, made = {}, {}, []
        for s, e, o, j in boundary:
            nt = self.new_tri(s, e, p)
            tn[3 * nt + 2] = o
            tn[3 * o + j] = nt
            start[s] = nt
            end[e] = nt
            made.append(nt)
        for nt in made:
            s, e = tv[3 * nt], tv[3 * nt + 1]
            tn[3 * nt] = start[e]
            tn[3 * nt + 1] = end[s]
        return made[0]

    def run(self, order):
        i0, i1 = int(order[0]), int(order[1])
        idx = -1
        for k in range(2, len(order)):
            o = self.orient(i0, i1, int(order[k]))
            if o:
                idx = k
                break
        if idx < 0:
            raise GeometryError("degenerate point set: all points are collinear")
        i2 = int(order[idx])
        if o < 0:
            i0, i1 = i1, i0
        t0 = self.new_tri(i0, i1, i2)
        g0 = self.new_tri(i2, i1, INF)
        g1 = self.new_tri(i0, i2, INF)
        g2 = self.new_tri(i1, i0, INF)
        self.tn[3 * t0:3 * t0 + 3] = [g0, g1, g2]
        self.tn[3 * g0:3 * g0 + 3] = [g2, g1, t0]
        self.tn[3 * g1:3 * g1 + 3] = [g0, g2, t0]
        self.tn[3 * g2:3 * g2 + 3] = [g1, g0, t0]
        last = t0
        for k in range(2, len(order)):
            if k == idx:
                continue
            p = int(order[k])
            last = self.insert(p, self.locate(last, p))
        return [tuple(self.tv[3 * t:3 * t + 3]) for t in range(len(self.alive))
                if self.alive[t] and not self.is_ghost(t)]


def _canonical(tris) -> np.ndarray:
    out = []
    for a, b, c in tris:
        m = min(a, b, c)
        if m == b:
            a, b, c = b, c, a
        elif m == c:
            a, b, c = c, a, b
        out.append((a, b, c))
    out.sort()
    return np.array(out, dtype=np.int64).reshape(-1, 3)


def triangulate(points, backend: str | None = "auto", seed: int = 0) -> Triangulation2D:
    """Delaunay triangulation of distinct 2-D points, not all collinear."""
    P = _check_input(points)
    order = insertion_order(P, seed)
    core = _backend.resolve(backend)
    try:
        tris = core.triangulate_core(P, order) if core is not None else _PyBW(P).run(order)
    except ValueError as exc:
        if isinstance(exc, GeometryError):
            raise
        raise GeometryError(str(exc)) from None
    T = _canonical(tris)
    edges = set()
    for a, b, c in T.tolist():
        edges.add((min(a, b), max(a, b)))
        edges.add((min(b, c), max(b, c)))
        edges.add((min(a, c), max(a, c)))
    P.setflags(write=False)
    T.setflags(write=False)
    return Triangulation2D(points=P, triangles=T, edges=frozenset(edges))
