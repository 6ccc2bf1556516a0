"""The ambiguous-sample construction.

A small point set that is a 0.72-sample of two different curves, made of
tangent circular arcs, is extended with vertical stems, copied along a strip,
bent into an annulus, and two annuli are tied together.  The resulting point
set samples four curves with different topology: two connected, two not.

Strip coordinates: the basic S-shaped piece rises from a bottom column at
x = x0 (points at heights -3, -2, -1, 0) to a top column at x = x0 - w
(heights 0.614, 1.614, 2.614, 3.614), w = 1.008.  Its mirror image rises to
the right.  Columns repeat every 2w; top columns are capped in pairs by
semicircles of radius w carrying three samples each.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .curves import Arc, Component, CurveModel, ExpBend, Line, Mapped, Rotated
from .geom import GeometryError
from .recon import ReconGraph
from .samples import SampleSet
from .sampling import _bisector_points, _consecutive, epsilon_star, ground_truth_graph, tag_sample

EPS = 0.72
W = 1.008  # horizontal offset between the b and c columns
RISE = 0.614  # height of c above b
SHIFT = 2.0 * W  # translation between a gadget and its copy
PERIOD = 2.0 * SHIFT  # one semicircle per period

A = np.array([0.0, -1.0])
B = np.array([0.0, 0.0])
C = np.array([-W, RISE])
D = np.array([-W, RISE + 1.0])


def _unit(v):
    v = np.asarray(v, dtype=np.float64)
    return v / math.hypot(*v)


def _arc(center, radius, p_from, p_to, ccw: bool) -> Arc:
    """Arc of the given circle from p_from to p_to in the given direction."""
    a0 = math.atan2(p_from[1] - center[1], p_from[0] - center[0])
    a1 = math.atan2(p_to[1] - center[1], p_to[0] - center[0])
    sg = 1.0 if ccw else -1.0
    sweep = sg * (math.fmod(sg * (a1 - a0), 2.0 * math.pi) % (2.0 * math.pi))
    return Arc((float(center[0]), float(center[1])), float(radius), a0, sweep)


def _circle_through(p1, p2, p3):
    ax, ay = p1
    bx, by = p2
    cx, cy = p3
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) + (cx * cx + cy * cy) * (ay - by)) / d
    uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) + (cx * cx + cy * cy) * (bx - ax)) / d
    center = np.array([ux, uy])
    return center, float(np.linalg.norm(center - np.asarray(p1)))


def _reverse(seg):
    if isinstance(seg, Line):
        return Line(seg.end, seg.start)
    end = seg.start_angle + seg.sweep
    return Arc(seg.center, seg.radius, end, -seg.sweep)


def _transform(seg, f, flips: bool):
    """Apply an affine isometry f to a segment; ``flips`` if it reverses
    orientation."""
    if isinstance(seg, Line):
        return Line(tuple(f(np.array(seg.start))), tuple(f(np.array(seg.end))))
    c = f(np.array(seg.center))
    p0 = f(seg.point(np.array(0.0)))
    ang = math.atan2(p0[1] - c[1], p0[0] - c[0])
    return Arc((float(c[0]), float(c[1])), seg.radius, ang, -seg.sweep if flips else seg.sweep)


def _reversed_chain(segs):
    return [_reverse(s) for s in reversed(segs)]


# ---------------------------------------------------------------- the S piece

@dataclass(frozen=True)
class SPiece:
    """Geometry of one S-shaped piece with its bottom column at x = 0."""

    b: tuple = (0.0, 0.0)
    eps: float = EPS
    log: list = field(default_factory=list, compare=False)

    def __post_init__(self):
        b = np.asarray(self.b, dtype=np.float64)
        log = self.log
        q = 0.5 * (b + C)
        s1, r1 = _circle_through(A, b, q)
        s2 = 2.0 * q - s1
        log.append(f"q = midpoint(b, c) = ({q[0]:.6f}, {q[1]:.6f}), d(q, b) = {np.linalg.norm(q - b):.6f}")
        log.append(f"S1 through a, b, q: centre ({s1[0]:.6f}, {s1[1]:.6f}), radius {r1:.6f}")
        log.append(f"S2 = S1 reflected through q: centre ({s2[0]:.6f}, {s2[1]:.6f})")
        # midpoint of the arc a..b sits on the bisector of a and b
        mid_ab = 0.5 * (A + b)
        p = np.array([s1[0] + math.sqrt(r1 * r1 - (mid_ab[1] - s1[1]) ** 2), mid_ab[1]])
        dp = float(np.linalg.norm(p - A))
        r3 = dp / self.eps
        log.append(f"p = midpoint(a, b) on S1 = ({p[0]:.6f}, {p[1]:.6f}), d_p = {dp:.6f}, stem radius d_p/eps = {r3:.6f}")
        s3 = A + r3 * _unit(A - s1)
        a2 = 2.0 * A - b
        a3 = 2.0 * a2 - A
        # S4: radius r3 through a2, externally tangent to S3, on the left
        s4 = _tangent_centre(s3, 2.0 * r3, a2, r3, left=True)
        # S5: radius r3, externally tangent to S4, leftmost point on the stem x = 0
        dx = r3 - s4[0]
        y5 = s4[1] - math.sqrt(4.0 * r3 * r3 - dx * dx)
        s5 = np.array([r3, y5])
        log.append(f"S3 tangent to S1 at a: centre ({s3[0]:.6f}, {s3[1]:.6f})")
        log.append(f"S4 through a2 = ({a2[0]:g}, {a2[1]:g}) tangent to S3: centre ({s4[0]:.6f}, {s4[1]:.6f})")
        log.append(f"S5 tangent to S4, vertical at (0, {y5:.6f}): centre ({s5[0]:.6f}, {s5[1]:.6f})")
        t34 = 0.5 * (s3 + s4)
        t45 = 0.5 * (s4 + s5)
        foot = np.array([0.0, y5])
        lower = [
            Line(tuple(a3), tuple(foot)),
            _arc(s5, r3, foot, t45, ccw=False),
            _arc(s4, r3, t45, t34, ccw=True),
            _arc(s3, r3, t34, A, ccw=False),
            _arc(s1, r1, A, q, ccw=True),
        ]
        core_up = _arc(s2, r1, q, D, ccw=False)

        def refl(x):
            return 2.0 * q - x
        upper = [_transform(s, refl, False) for s in _reversed_chain(lower[:-1])]
        segs = lower + [core_up] + upper
        object.__setattr__(self, "segments", tuple(segs))
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "centres", {"S1": s1, "S2": s2, "S3": s3, "S4": s4, "S5": s5})
        object.__setattr__(self, "r1", r1)
        object.__setattr__(self, "r3", r3)
        e = 2.0 * D - C
        f = 2.0 * e - D
        object.__setattr__(self, "bottom", np.array([a3, a2, A, b]))
        object.__setattr__(self, "top", np.array([C, D, e, f]))
        Component(tuple(segs), closed=False)  # raises if not C1


def _tangent_centre(c0, d0, p, d1, left: bool):
    """Point at distance d0 from c0 and d1 from p (the one with smaller x if
    ``left``)."""
    c0, p = np.asarray(c0), np.asarray(p)
    L = float(np.linalg.norm(p - c0))
    a = (d0 * d0 - d1 * d1 + L * L) / (2.0 * L)
    h = math.sqrt(max(d0 * d0 - a * a, 0.0))
    u = (p - c0) / L
    base = c0 + a * u
    perp = np.array([-u[1], u[0]])
    cands = [base + h * perp, base - h * perp]
    return min(cands, key=lambda v: v[0]) if left else max(cands, key=lambda v: v[0])


def _shift(segs, dx, mirror=False):
    if mirror:
        return [_transform(s, lambda p: np.array([dx - p[0], p[1]]), True) for s in segs]
    return [_transform(s, lambda p: p + np.array([dx, 0.0]), False) for s in segs]


# ---------------------------------------------------------------- strip layout

_PIECE = None


def _template() -> SPiece:
    global _PIECE
    if _PIECE is None:
        _PIECE = SPiece()
    return _PIECE


def _cap_segment(j: int) -> Arc:
    """Semicircle over the top columns at PERIOD*j -/+ W, left to right."""
    top = float(_template().top[-1, 1])
    return Arc((PERIOD * j, top), W, math.pi, -math.pi)


def _cap_points(j: int) -> np.ndarray:
    top = float(_template().top[-1, 1])
    ang = np.radians([135.0, 90.0, 45.0])
    return np.stack([PERIOD * j + W * np.cos(ang), top + W * np.sin(ang)], axis=1)


def _column(x0: float, which: str) -> np.ndarray:
    t = _template()
    pts = t.bottom if which == "bottom" else t.top
    return pts + np.array([x0 - pts[0, 0], 0.0])


def period_points(j: int) -> np.ndarray:
    """The 19 samples of period j, in left-to-right column order."""
    x = PERIOD * j
    return np.vstack([_column(x - W, "top"), _column(x, "bottom"), _cap_points(j),
                      _column(x + W, "top"), _column(x + SHIFT, "bottom")])


def _arch(variant: int, j: int):
    """Segments of one arch and the indices (within periods j-1..j) of the
    samples it visits, in order.  Variant 1 (blue) joins the bottom columns
    PERIOD*j and PERIOD*j + SHIFT through cap j; variant 2 (red) joins
    PERIOD*j - SHIFT and PERIOD*j through cap j."""
    piece = list(_template().segments)
    x = PERIOD * j
    cap = _cap_segment(j)
    if variant == 1:
        segs = _shift(piece, x) + [cap] + _reversed_chain(_shift(piece, x + SHIFT))
    elif variant == 2:
        segs = _shift(piece, x, mirror=True) + [_reverse(cap)] + _reversed_chain(_shift(piece, x - SHIFT, mirror=True))
    else:
        raise GeometryError(f"strip variant must be 1 or 2, got {variant}")
    return segs


# sample order along an arch as (period offset, index into period_points)
_ORDER = {
    1: [(0, 4), (0, 5), (0, 6), (0, 7), (0, 0), (0, 1), (0, 2), (0, 3), (0, 8), (0, 9), (0, 10),
        (0, 14), (0, 13), (0, 12), (0, 11), (0, 18), (0, 17), (0, 16), (0, 15)],
    2: [(0, 4), (0, 5), (0, 6), (0, 7), (0, 11), (0, 12), (0, 13), (0, 14), (0, 10), (0, 9), (0, 8),
        (0, 3), (0, 2), (0, 1), (0, 0), (-1, 18), (-1, 17), (-1, 16), (-1, 15)],
}
PER_PERIOD = 19


def arch_samples(variant: int, j: int) -> np.ndarray:
    """Samples along arch j of a variant, in curve order."""
    return np.array([period_points(j + dp)[i] for dp, i in _ORDER[variant]])


def _arch_ends(variant: int, j: int) -> tuple[int, int]:
    """Bottom-column node ids (2j at x = PERIOD*j, 2j+1 at PERIOD*j + SHIFT)
    where an arch starts and ends."""
    return (2 * j, 2 * j + 1) if variant == 1 else (2 * j, 2 * j - 1)


def gadget_loop() -> CurveModel:
    """One variant-1 arch closed underneath by a semicircle: a closed C1
    curve built from the gadget pieces."""
    segs = _arch(1, 0)
    bottom = float(_template().bottom[0, 1])
    close = Arc((W, bottom), W, 0.0, -math.pi)
    return CurveModel((Component(tuple(segs) + (close,), closed=True),))


# ---------------------------------------------------------------- templates

class _Template:
    """An arch of one variant, optionally bent, with the arc-length
    parameters of its samples; copies are rotations that share tables."""

    def __init__(self, variant: int, bend: ExpBend | None = None):
        flat = _arch(variant, 0)
        comp = Component(tuple(flat), closed=False)
        t, d = comp.project(arch_samples(variant, 0))
        if d.max() > 1e-9:
            raise GeometryError(f"arch misses a sample by {d.max():.3e}")
        seg = np.clip(np.searchsorted(comp.offsets, t, side="right") - 1, 0, len(flat) - 1)
        u = t - comp.offsets[seg]
        self.variant, self.bend = variant, bend
        if bend is None:
            self.fwd = flat
            self.rev = _reversed_chain(flat)
            self.params = t
        else:
            self.fwd = [Mapped(x, bend) for x in flat]
            self.rev = [Mapped(x, bend) for x in _reversed_chain(flat)]
            off = np.concatenate([[0.0], np.cumsum([x.length for x in self.fwd])])
            self.params = np.array([off[k] + self.fwd[k]._arclen(np.array(v)) for k, v in zip(seg, u)])
        self.length = float(sum(x.length for x in self.fwd))
        Component(tuple(self.fwd), closed=False)
        Component(tuple(self.rev), closed=False)

    def copy(self, j: int, reverse: bool = False):
        if self.bend is None:
            segs = _arch(self.variant, j)
            return _reversed_chain(segs) if reverse else segs
        ang = -PERIOD * j / self.bend.R
        return [Rotated(x, ang) for x in (self.rev if reverse else self.fwd)]


# ---------------------------------------------------------------- gadget type

@dataclass
class Gadget:
    """A point set with several curves that it samples equally well.

    ``tagged[i]`` carries the component/parameter tags of the points on
    ``variants[i]``.  ``windows(i)`` yields (curve, tagged sample, region)
    triples that together cover variant i for verification; for the bent
    constructions this is one period plus neighbours, which suffices because
    the configuration is invariant under rotation by one period.
    """

    name: str
    points: np.ndarray
    variants: list
    tagged: list
    construction_log: dict
    windows: object = None
    components: list = field(default_factory=list)

    def __post_init__(self):
        if self.windows is None:
            self.windows = lambda i: [(self.variants[i], self.tagged[i], None)]
        if not self.components:
            self.components = [len(v.components) for v in self.variants]

    @property
    def sample(self) -> SampleSet:
        return SampleSet(self.points)

    def ground_truth(self, i: int) -> ReconGraph:
        return ground_truth_graph(self.variants[i], self.tagged[i])

    def log_json(self) -> dict:
        return _jsonable(self.construction_log)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.generic):
        return x.item()
    return x


def _circle_entry(c, r):
    return {"center": [float(c[0]), float(c[1])], "radius": float(r)}


def _base_log(piece: SPiece) -> dict:
    c = piece.centres
    return {
        "circles": {"S1": _circle_entry(c["S1"], piece.r1), "S2": _circle_entry(c["S2"], piece.r1),
                    "S3": _circle_entry(c["S3"], piece.r3), "S4": _circle_entry(c["S4"], piece.r3),
                    "S5": _circle_entry(c["S5"], piece.r3)},
        "q": piece.q.tolist(),
        "d(b,c)": float(np.linalg.norm(C - np.asarray(piece.b))),
        "d(q,b)": float(np.linalg.norm(piece.q - np.asarray(piece.b))),
        "shift": SHIFT,
        # d(b, c') = d(b, c) solves to exactly 2 |x_c|; the figure draws 2.015
        "shift - figure offset": SHIFT - 2.015,
        "steps": list(piece.log),
    }


# ---------------------------------------------------------------- base and extension

def base_gadget(b=(0.0, 0.0)) -> Gadget:
    """The 8 points a, b, c, d and their copies shifted right by 2.016, which
    makes d(b, c') = d(b, c), with the two arc pairs C and C'."""
    piece = SPiece(b=tuple(map(float, b)))
    core = [s for s in piece.segments if isinstance(s, Arc) and s.radius == piece.r1]
    pts = np.array([A, piece.b, C, D], dtype=np.float64)
    pts = np.vstack([pts, pts + [SHIFT, 0.0]])
    curves = CurveModel((Component(tuple(core), closed=False),
                         Component(tuple(_shift(core, SHIFT)), closed=False)))
    log = _base_log(piece)
    log["points"] = {k: v.tolist() for k, v in zip(["a", "b", "c", "d", "a'", "b'", "c'", "d'"], pts)}
    return Gadget("base", pts, [curves], [tag_sample(curves, pts)], log)


def extend_gadget(g: Gadget | None = None) -> Gadget:
    """Add e, f above and two points below each column; the curves gain the
    stem arcs so that they end with vertical tangents."""
    if g is not None and g.name != "base":
        raise GeometryError("extend_gadget expects a base gadget")
    piece = _template()
    segs = list(piece.segments)
    pts = np.vstack([piece.bottom, piece.top])
    pts = np.vstack([pts, pts + [SHIFT, 0.0]])
    curves = CurveModel((Component(tuple(segs), closed=False), Component(tuple(_shift(segs, SHIFT)), closed=False)))
    log = _base_log(piece)
    top = piece.top
    r = 0.5 * (C + D)  # midpoint of [c, d] on the curve, by symmetry
    comp = curves.components[0]
    t, _ = comp.project(np.array([C, D, top[2]]))
    s_mid = _bisect_on(comp, t[1], t[2], D, top[2])
    r_mid = _bisect_on(comp, t[0], t[1], C, D)
    log["r"] = r_mid.tolist()
    log["d_r"] = float(np.linalg.norm(r_mid - D))
    log["s"] = s_mid.tolist()
    log["d_s"] = float(np.linalg.norm(s_mid - D))
    log["stem radius = d_r/eps"] = float(np.linalg.norm(r_mid - D)) / EPS
    end_tan = comp.tangent_at(np.array(comp.length))
    log["tangent at f"] = end_tan.tolist()
    log["points"] = {"e": top[2].tolist(), "f": top[3].tolist(), "a2": piece.bottom[1].tolist(),
                     "a3": piece.bottom[0].tolist()}
    del r
    return Gadget("extended", pts, [curves], [tag_sample(curves, pts)], log)


def _bisect_on(comp: Component, t0, t1, p0, p1) -> np.ndarray:
    lo, hi = float(t0), float(t1)
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        x = comp.point_at(np.array(mid))
        if np.linalg.norm(x - p0) < np.linalg.norm(x - p1):
            lo = mid
        else:
            hi = mid
    return comp.point_at(np.array(0.5 * (lo + hi)))


# ---------------------------------------------------------------- strip

def strip(k: int) -> Gadget:
    """k periods of the extended gadget with their semicircle caps.

    Variant 1 pairs each bottom column with the top column to its left,
    variant 2 with the one to its right.  Variant 2 runs off both ends, so
    the pieces beyond the outermost bottom columns are exempt from
    verification."""
    if k < 1:
        raise GeometryError("strip needs k >= 1")
    pts = np.vstack([period_points(j) for j in range(k)])
    blue = CurveModel(tuple(Component(tuple(_arch(1, j)), closed=False) for j in range(k)))
    red_parts = [Component(tuple(_arch(2, j)), closed=False) for j in range(k)]
    last = PERIOD * k - SHIFT
    red_parts.append(Component(tuple(_shift(list(_template().segments), last, mirror=True)), closed=False))
    red = CurveModel(tuple(red_parts))
    lo, hi = 0.0, last

    def region(P):
        return (P[:, 0] >= lo - 1e-12) & (P[:, 0] <= hi + 1e-12)
    log = _base_log(_template())
    log["periods"] = k
    log["points per period"] = PER_PERIOD
    log["checked x-range"] = [lo, hi]
    tagged = [tag_sample(blue, pts), tag_sample(red, pts)]
    g = Gadget(f"strip({k})", pts, [blue, red], tagged, log)
    g.windows = lambda i: [(g.variants[i], g.tagged[i], region)]
    return g


# ---------------------------------------------------------------- annulus

TIE_LENGTH = 4.0
TIE_SAMPLES = (1.0, 2.0, 3.0)
K_STAR = 4096  # smallest power of two passing the 0.72 check (doubling search from 256)
_FEASIBILITY: dict = {}


def bend_radius(k: int) -> float:
    return k * PERIOD / (2.0 * math.pi)


def _sector(R: float):
    lo, hi = -W / R, 3.0 * W / R

    def region(P):
        th = np.arctan2(P[:, 0], P[:, 1])
        return (th >= lo) & (th < hi)
    return region


def _period_block(k: int) -> np.ndarray:
    base = period_points(0)
    return (base[None, :, :] + np.stack([PERIOD * np.arange(k), np.zeros(k)], axis=1)[:, None, :]).reshape(-1, 2)


def _arch_indices(variant: int, j: int, k: int, offset: int = 0) -> np.ndarray:
    return np.array([offset + PER_PERIOD * ((j + dp) % k) + i for dp, i in _ORDER[variant]])


class _Ring:
    """The strip with k periods bent onto a circle of radius R."""

    def __init__(self, k: int, bend: ExpBend, offset: int = 0):
        if k < 2:
            raise GeometryError("an annulus needs at least 2 periods")
        self.k, self.bend, self.offset = k, bend, offset
        self.points = bend(_period_block(k))
        self.templates = {v: _Template(v, bend) for v in (1, 2)}

    def arch(self, variant: int, j: int, reverse: bool = False):
        """(segments, sample indices, sample params) of arch j."""
        t = self.templates[variant]
        idx = _arch_indices(variant, j, self.k, self.offset)
        segs = t.copy(j, reverse)
        if reverse:
            return segs, idx[::-1], t.length - t.params[::-1], t.length
        return segs, idx, t.params, t.length

    def foot(self, node: int) -> int:
        """Global index of the lowest sample of a bottom column."""
        j, odd = divmod(node % (2 * self.k), 2)
        return self.offset + PER_PERIOD * j + (15 if odd else 4)


def _assemble(pieces, n_points: int, closed: bool, check: bool):
    """Chain pieces [(segments, idx, params, length)] into components and
    tag their samples.  ``pieces`` is a list of chains."""
    comps = []
    comp_id = np.full(n_points, -1, dtype=np.int64)
    par = np.zeros(n_points)
    for c, chain in enumerate(pieces):
        segs = []
        off = 0.0
        for sg, idx, prm, length in chain:
            segs.extend(sg)
            comp_id[idx] = c
            par[idx] = off + prm
            off += length
        comps.append(Component(tuple(segs), closed=closed, check=check))
        if closed:
            par[comp_id == c] = np.mod(par[comp_id == c], off)
    return comps, comp_id, par


def _ring_windows(ring: _Ring, variant: int, points: np.ndarray):
    js = range(-1, 3) if ring.k >= 6 else range(ring.k)
    chains = [[ring.arch(variant, j)] for j in js]
    return _window_from_chains(chains, points, _sector(ring.bend.R))


def _window_from_chains(chains, points, region):
    used = np.unique(np.concatenate([np.concatenate([p[1] for p in ch]) for ch in chains]))
    remap = np.full(len(points), -1, dtype=np.int64)
    remap[used] = np.arange(len(used))
    local = []
    for ch in chains:
        local.append([(sg, remap[idx], prm, length) for sg, idx, prm, length in ch])
    comps, cid, par = _assemble(local, len(used), closed=False, check=True)
    # a point shared by two chains keeps the tag of the later one
    return [(CurveModel(tuple(comps)), SampleSet(points[used], cid, par), region)]


def annulus_eps(k: int, variant: int, density: float = 1e-3) -> float:
    """Measured eps_star of the bent strip with k periods (one period checked,
    which covers the whole ring by rotational symmetry)."""
    key = (k, variant, density)
    if key not in _FEASIBILITY:
        ring = _Ring(k, ExpBend(bend_radius(k), 1))
        curve, tagged, region = _ring_windows(ring, variant, ring.points)[0]
        _FEASIBILITY[key] = epsilon_star(curve, tagged, density, region=region).eps_star
    return _FEASIBILITY[key]


def annulus(k: int, variant: int, check: bool = True, density: float = 1e-3):
    """Bend the k-period strip into a ring (R = strip length / 2 pi) by the
    conformal map (x, y) -> R exp(y/R) (sin(x/R), cos(x/R)), which is
    x -> angle x/R, y -> radius R + y to first order.

    Returns (tagged SampleSet, CurveModel).  With ``check`` the measured
    eps_star must not exceed 0.72."""
    if variant not in (1, 2):
        raise GeometryError(f"annulus variant must be 1 or 2, got {variant}")
    if check:
        e = annulus_eps(k, variant, density)
        if e > EPS:
            ok = [kk for (kk, v, dd), val in _FEASIBILITY.items() if val <= EPS and dd == density]
            best = min(ok) if ok else None
            raise GeometryError(f"k={k} periods give eps_star {e:.6f} > {EPS}; smallest workable k found so far: {best}")
    g = annulus_gadget(k)
    i = variant - 1
    return g.tagged[i], g.variants[i]


def annulus_gadget(k: int) -> Gadget:
    ring = _Ring(k, ExpBend(bend_radius(k), 1))
    n = len(ring.points)
    variants, tagged = [], []
    for v in (1, 2):
        chains = [[ring.arch(v, j)] for j in range(k)]
        comps, cid, par = _assemble(chains, n, closed=False, check=False)
        variants.append(CurveModel(tuple(comps), generator={"type": "annulus", "periods": k, "variant": v}))
        tagged.append(SampleSet(ring.points, cid, par))
    log = _base_log(_template())
    log["periods"] = k
    log["bend radius"] = ring.bend.R
    g = Gadget(f"annulus({k})", ring.points, variants, tagged, log)
    g.windows = lambda i: _ring_windows(ring, i + 1, ring.points)
    return g


def k_min_search(start: int = 256, limit: int = 1 << 14, density: float = 1e-3) -> int:
    """Smallest power-of-two multiple of ``start`` whose ring passes the
    0.72 check for both variants."""
    k = start
    while k <= limit:
        if all(annulus_eps(k, v, density) <= EPS for v in (1, 2)):
            return k
        k *= 2
    raise GeometryError(f"no workable k up to {limit}")


# ---------------------------------------------------------------- tied annuli

# (outer ring variant, inner ring variant) for C1..C4
TIED_VARIANTS = {1: (1, 2), 2: (2, 1), 3: (1, 1), 4: (2, 2)}


class _Tied:
    """Two concentric rings whose bottom columns face each other, joined by
    radial ties.  The outer ring is bent with its caps outwards, the inner
    one (anti-conformally, scaled) with its caps inwards."""

    def __init__(self, k: int):
        R = bend_radius(k)
        bottom = float(_template().bottom[0, 1])
        inner_out = R * math.exp(bottom / R) - TIE_LENGTH
        if inner_out <= 0.0:
            raise GeometryError(f"k={k} periods leave no room for ties of length {TIE_LENGTH}; use a larger k")
        mu = inner_out / (R * math.exp(-bottom / R))
        self.k, self.R, self.mu = k, R, mu
        self.outer = _Ring(k, ExpBend(R, 1), 0)
        self.inner = _Ring(k, ExpBend(R, -1, mu), len(self.outer.points))
        n0 = len(self.outer.points) + len(self.inner.points)
        feet_o = self.outer.points[[self.outer.foot(i) - self.outer.offset for i in range(2 * k)]]
        feet_i = self.inner.points[[self.inner.foot(i) - self.inner.offset for i in range(2 * k)]]
        self.tie_ends = (feet_o, feet_i)
        d = feet_i - feet_o
        L = np.linalg.norm(d, axis=1, keepdims=True)
        u = d / L
        ties = feet_o[:, None, :] + np.asarray(TIE_SAMPLES)[None, :, None] * u[:, None, :]
        self.tie_offset = n0
        self.points = np.vstack([self.outer.points, self.inner.points, ties.reshape(-1, 2)])
        self.tie_len = L[:, 0]

    def tie(self, node: int, outward: bool):
        """Tie at bottom node (outer -> inner unless ``outward``)."""
        i = node % (2 * self.k)
        a, b = self.tie_ends[0][i], self.tie_ends[1][i]
        idx = self.tie_offset + 3 * i + np.arange(3)
        prm = np.asarray(TIE_SAMPLES)
        L = float(self.tie_len[i])
        if outward:
            return [Line(tuple(b), tuple(a))], idx[::-1], L - prm[::-1], L
        return [Line(tuple(a), tuple(b))], idx, prm, L

    def walk(self, variant: int, window=None):
        """Chains of pieces forming the components of variant C1..C4.  With
        ``window`` = (arch js, tie nodes) only pieces inside it are kept and
        each maximal run becomes its own chain."""
        vo, vi = TIED_VARIANTS[variant]
        k = self.k
        rings = {"o": (self.outer, vo), "i": (self.inner, vi)}
        # arch lookup by node: node -> (j, at_start)
        by_node = {}
        for side, (ring, v) in rings.items():
            for j in range(k):
                s, e = _arch_ends(v, j)
                by_node[(side, s % (2 * k))] = (j, True)
                by_node[(side, e % (2 * k))] = (j, False)
        seen = set()
        chains = []
        for j0 in range(k):
            if ("o", j0) in seen:
                continue
            chain = []
            side, j, forward = "o", j0, True
            while (side, j) not in seen:
                seen.add((side, j))
                ring, v = rings[side]
                s, e = _arch_ends(v, j)
                chain.append(("arch", side, j, not forward))
                end = (e if forward else s) % (2 * k)
                chain.append(("tie", end, side == "i"))
                side = "i" if side == "o" else "o"
                j, at_start = by_node[(side, end)]
                forward = at_start
            chains.append(chain)
        out = []
        for chain in chains:
            runs, cur = [], []
            for item in chain:
                keep = window is None or (
                    (item[0] == "arch" and item[2] % k in window[0]) or
                    (item[0] == "tie" and item[1] in window[1]))
                if keep:
                    cur.append(self._piece(item, rings))
                elif cur:
                    runs.append(cur)
                    cur = []
            if cur:
                runs.append(cur)
            if window is None:
                out.append(runs[0])
            else:
                out.extend(runs)
        return out

    def _piece(self, item, rings):
        if item[0] == "arch":
            _, side, j, rev = item
            ring, v = rings[side]
            return ring.arch(v, j, reverse=rev)
        _, node, outward = item
        return self.tie(node, outward)


def tied_annuli_gadget(k: int = K_STAR) -> Gadget:
    """One point set, four curves: C1 and C2 connected, C3 and C4 made of k
    closed components each."""
    tied = _Tied(k)
    n = len(tied.points)
    variants, tagged, counts = [], [], []
    for v in (1, 2, 3, 4):
        chains = tied.walk(v)
        comps, cid, par = _assemble(chains, n, closed=True, check=False)
        variants.append(CurveModel(tuple(comps), generator={"type": "tied_annuli", "periods": k, "variant": v}))
        tagged.append(SampleSet(tied.points, cid, par))
        counts.append(len(comps))
    log = _base_log(_template())
    log.update({"periods": k, "outer bend radius": tied.R, "inner scale": tied.mu,
                "tie length": TIE_LENGTH, "component counts": counts})
    js = {(j % k) for j in range(-1, 3)} if k >= 6 else set(range(k))
    nodes = {(i % (2 * k)) for i in range(-2, 6)} if k >= 6 else set(range(2 * k))
    region = _sector(tied.R)

    def windows(i):
        chains = tied.walk(i + 1, window=(js, nodes))
        return _window_from_chains(chains, tied.points, region)
    return Gadget(f"tied_annuli({k})", tied.points, variants, tagged, log, windows, counts)


def tied_annuli(variant: int, k: int = K_STAR):
    if variant not in TIED_VARIANTS:
        raise GeometryError(f"tied_annuli variant must be 1..4, got {variant}")
    g = tied_annuli_gadget(k)
    return g.tagged[variant - 1], g.variants[variant - 1]


def curve_from_generator(spec: dict) -> CurveModel:
    """Rebuild a generated curve from its recorded parameters."""
    kind, k, v = spec.get("type"), int(spec.get("periods", 0)), int(spec.get("variant", 0))
    if kind == "annulus" and v in (1, 2) and k >= 1:
        return annulus_gadget(k).variants[v - 1]
    if kind == "tied_annuli" and v in TIED_VARIANTS and k >= 1:
        return tied_annuli_gadget(k).variants[v - 1]
    raise GeometryError(f"unknown curve generator {spec!r}")


# ---------------------------------------------------------------- verification

@dataclass
class VerificationReport:
    eps: float
    margins: list  # one entry per checked midpoint
    eps_star: list  # dense-grid eps_star per variant (worst window)
    density: float

    @property
    def min_margin(self) -> float:
        return min(m["margin"] for m in self.margins)

    @property
    def ok(self) -> bool:
        return self.min_margin > 0.0 and max(self.eps_star) <= self.eps

    def to_json(self) -> dict:
        return {"eps": self.eps, "density": self.density, "ok": self.ok, "min_margin": self.min_margin,
                "eps_star": list(self.eps_star), "margins": _jsonable(self.margins)}


def _exact_centres(curve: CurveModel, dense: np.ndarray) -> np.ndarray:
    """Centres of plain circular arcs whose full disc is free of the curve:
    these are medial points known in closed form."""
    out = []
    tree = cKDTree(dense)
    for comp in curve.components:
        for s in comp.segments:
            if isinstance(s, Arc):
                d, _ = tree.query(np.asarray(s.center))
                if d >= s.radius * (1.0 - 1e-9):
                    out.append(s.center)
    return np.unique(np.array(out, dtype=np.float64).reshape(-1, 2), axis=0)


def verify_gadget(g: Gadget, eps: float = EPS, density: float = 1e-3) -> VerificationReport:
    """For each midpoint t (the curve point equidistant from two consecutive
    samples), the clearance d(t, medial axis) - d(t, S)/eps must be positive;
    a dense-grid eps_star is computed alongside."""
    margins, stars = [], []
    for i in range(len(g.variants)):
        worst = 0.0
        for curve, tagged, region in g.windows(i):
            pairs = _consecutive(curve, tagged)
            T, tc, _ = _bisector_points(curve, tagged, pairs)
            keep = np.ones(len(T), dtype=bool) if region is None else np.asarray(region(T), dtype=bool)
            T = T[keep]
            ab = [(a, b) for (_, a, b, _, _), k in zip(pairs, keep) if k]
            dense, _, _ = curve.discretize(density)
            cloud = curve.medial_cloud(density)
            centres = _exact_centres(curve, dense)
            M = np.vstack([cloud, centres]) if len(centres) else cloud
            dm, jm = cKDTree(M).query(T)
            dt, _ = cKDTree(tagged.points).query(T)
            for t, m_d, j, d_t, (a, b) in zip(T, dm, jm, dt, ab):
                margins.append({"variant": i + 1, "t": t.tolist(), "between": [tagged.points[a].tolist(), tagged.points[b].tolist()],
                                "d_t": float(d_t), "medial_distance": float(m_d), "nearest_medial": M[j].tolist(),
                                "margin": float(m_d - d_t / eps)})
            rep = epsilon_star(curve, tagged, density, region=region)
            worst = max(worst, rep.eps_star)
        stars.append(worst)
    return VerificationReport(eps, margins, stars, density)


def perturbed_gadget(dy: float = 0.1) -> Gadget:
    """The base gadget with the sample b moved up by dy (curves unchanged)."""
    g = base_gadget()
    pts = g.points.copy()
    pts[1, 1] += dy
    t = g.tagged[0]
    return Gadget("perturbed", pts, g.variants, [SampleSet(pts, t.components, t.params)], g.construction_log)


# ---------------------------------------------------------------- revolution

def revolve(points, m: int, R: float = 0.0) -> SampleSet:
    """Rotate planar points about the y-axis after shifting them by R:
    (x, y) -> ((x+R) cos th_j, (x+R) sin th_j, y), th_j = 2 pi j / m."""
    P = np.asarray(points.points if isinstance(points, SampleSet) else points, dtype=np.float64)
    if P.ndim != 2 or P.shape[1] != 2:
        raise GeometryError("revolve expects planar points")
    if m < 3:
        raise GeometryError("revolve needs m >= 3")
    rad = P[:, 0] + R
    if np.any(rad <= 0.0):
        raise GeometryError(f"nonpositive revolved radius {rad.min():.6g}; increase R")
    th = 2.0 * math.pi * np.arange(m) / m
    out = np.stack([np.outer(np.cos(th), rad), np.outer(np.sin(th), rad),
                    np.broadcast_to(P[:, 1], (m, len(P)))], axis=-1)
    return SampleSet(out.reshape(-1, 3))


def revolve_spacing_ok(x_max: float, m: int, R: float, clearance: float, eps: float = EPS) -> bool:
    """Sufficient condition for the revolved set: the chord between
    neighbouring copies of the outermost point stays below eps times the
    smallest planar clearance."""
    return 2.0 * (x_max + R) * math.sin(math.pi / m) < eps * clearance


# recorded fixture: base gadget shifted by R, m copies from revolve_min_m with the smallest verified margin
REVOLVE_R = 2.0
REVOLVE_M = 131072


def revolve_min_m(x_max: float, R: float, clearance: float, eps: float = EPS) -> int:
    m = 4
    while not revolve_spacing_ok(x_max, m, R, clearance, eps):
        m *= 2
    return m
