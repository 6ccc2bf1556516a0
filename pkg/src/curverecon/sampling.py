"""Sampling-condition validators, ground-truth graphs and a greedy sampler.

A sample S of a curve is an eps-sample when d(p, S) < eps * lfs(p) for every
curve point p.  The validators evaluate the ratio on a dense arc-length grid
plus, between consecutive samples, the point equidistant from both (where the
distance to S peaks), and report the worst ratio with its location.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .curves import CurveModel, make_curve
from .geom import GeometryError
from .recon import ReconGraph
from .samples import SampleSet, as_sample


@dataclass(frozen=True)
class SamplingReport:
    eps_star: float  # worst ratio on the checked points
    eps_star_corrected: float  # upper bound accounting for the grid step
    witness: np.ndarray
    witness_component: int
    witness_param: float
    density: float
    n_checked: int
    kind: str = "eps"

    def verdict(self, eps: float) -> bool:
        return self.eps_star < eps

    def to_json(self) -> dict:
        return {"kind": self.kind, "eps_star": self.eps_star, "eps_star_corrected": self.eps_star_corrected,
                "witness": [float(v) for v in self.witness], "witness_component": self.witness_component,
                "witness_param": self.witness_param, "density": self.density, "n_checked": self.n_checked}


def default_density(curve: CurveModel) -> float:
    return 1e-3 * float(curve.lengths.min())


def tag_sample(curve: CurveModel, sample) -> SampleSet:
    """Attach (component, parameter) tags by projecting onto the curve."""
    s = as_sample(sample)
    if s.tagged:
        return s
    comp, par, dist = curve.project(s.points)
    scale = max(1.0, float(np.max(np.abs(s.points))))
    if np.any(dist > 1e-6 * scale):
        i = int(np.argmax(dist))
        raise GeometryError(f"sample point {i} is {dist[i]:.3e} away from the curve")
    return SampleSet(s.points, comp, par)


def _consecutive(curve: CurveModel, s: SampleSet):
    """Per component, sample indices in parameter order and the pairs a -> b."""
    pairs = []
    for k, c in enumerate(curve.components):
        idx = np.flatnonzero(s.components == k)
        idx = idx[np.argsort(s.params[idx], kind="stable")]
        if len(idx) == 0:
            continue
        nxt = np.roll(idx, -1)
        for a, b in zip(idx, nxt):
            if not c.closed and a == idx[-1]:
                continue
            if a == b:
                continue
            ta, tb = s.params[a], s.params[b]
            if tb <= ta:
                tb += c.length
            pairs.append((k, int(a), int(b), float(ta), float(tb)))
    return pairs


def _bisector_points(curve: CurveModel, s: SampleSet, pairs):
    """For each consecutive pair, the curve point between them equidistant
    from both (found by bisection on the parameter)."""
    if not pairs:
        return np.zeros((0, 2)), np.zeros(0, dtype=np.int64), np.zeros(0)
    comp = np.array([p[0] for p in pairs])
    A = s.points[[p[1] for p in pairs]]
    B = s.points[[p[2] for p in pairs]]
    lo = np.array([p[3] for p in pairs])
    hi = np.array([p[4] for p in pairs])
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        X = np.empty((len(mid), 2))
        for k in np.unique(comp):
            m = comp == k
            X[m] = curve.components[k].point_at(mid[m])
        closer_a = np.linalg.norm(X - A, axis=1) < np.linalg.norm(X - B, axis=1)
        lo = np.where(closer_a, mid, lo)
        hi = np.where(closer_a, hi, mid)
    t = 0.5 * (lo + hi)
    X = np.empty((len(t), 2))
    for k in np.unique(comp):
        m = comp == k
        X[m] = curve.components[k].point_at(t[m])
    lengths = curve.lengths[comp]
    closed = np.array([curve.components[k].closed for k in comp])
    return X, comp, np.where(closed, np.mod(t, lengths), t)


def _in_spans(comp, par, spans):
    if spans is None:
        return np.ones(len(par), dtype=bool)
    keep = np.zeros(len(par), dtype=bool)
    for k, t0, t1 in spans:
        keep |= (comp == k) & (par >= t0) & (par <= t1)
    return keep


def epsilon_star(curve, sample, density: float | None = None, spans=None, region=None) -> SamplingReport:
    """Worst d(p, S) / lfs(p) over dense curve points p.

    ``spans`` optionally restricts the check to [(component, t0, t1), ...];
    ``region`` to points where region(P) is true.
    """
    curve = make_curve(curve)
    s = as_sample(sample)
    if s.n == 0:
        raise GeometryError("empty sample")
    if density is None:
        density = default_density(curve)
    s = tag_sample(curve, s)
    G, gc, gp = curve.discretize(density)
    X, xc, xp = _bisector_points(curve, s, _consecutive(curve, s))
    P = np.concatenate([G, X])
    comp = np.concatenate([gc, xc])
    par = np.concatenate([gp, xp])
    keep = _in_spans(comp, par, spans)
    if region is not None:
        keep &= np.asarray(region(P), dtype=bool)
    P, comp, par = P[keep], comp[keep], par[keep]
    if len(P) == 0:
        raise GeometryError("no curve points to check")
    dist, _ = cKDTree(s.points).query(P)
    lfs = curve.lfs(P, density, comp)
    ratio = dist / lfs
    i = int(np.argmax(ratio))
    # between grid points d(., S) and lfs are 1-Lipschitz in arc length
    h = 0.5 * density
    ng = int(keep[:len(G)].sum())
    with np.errstate(divide="ignore"):
        corr = (dist[:ng] + h) / np.maximum(lfs[:ng] - h, 0.0)
    corrected = max(float(ratio.max()), float(corr.max()) if ng else 0.0)
    return SamplingReport(float(ratio[i]), corrected, P[i].copy(), int(comp[i]), float(par[i]), float(density), len(P))


def rho_star(curve, sample, density: float | None = None, spans=None) -> SamplingReport:
    """Worst d(p, S) / reach([a, b]) over consecutive pairs a -> b and
    dense p in [a, b], where reach is the smallest lfs on that stretch."""
    curve = make_curve(curve)
    s = as_sample(sample)
    if s.n == 0:
        raise GeometryError("empty sample")
    if not s.tagged:
        raise GeometryError("rho_star needs component/parameter tags on the sample")
    if density is None:
        density = default_density(curve)
    pairs = _consecutive(curve, s)
    X, xc, xp = _bisector_points(curve, s, pairs)
    tree = cKDTree(s.points)
    best = (-1.0, None, 0, 0.0)
    worst_corr = 0.0
    for (k, a, b, ta, tb), x, t_x in zip(pairs, X, xp):
        c = curve.components[k]
        m = max(int(math.ceil((tb - ta) / density)), 1)
        t = np.linspace(ta, tb, m + 1)
        tt = np.mod(t, c.length) if c.closed else t
        keep = _in_spans(np.full(len(tt), k), tt, spans)
        if not np.any(keep):
            continue
        pts = c.point_at(tt)
        reach = float(curve.lfs(pts, density, np.full(len(pts), k)).min())
        cand = np.vstack([pts[keep], x[None, :]])
        ctp = np.concatenate([tt[keep], [t_x]])
        if spans is not None and not _in_spans(np.array([k]), np.array([t_x]), spans)[0]:
            cand, ctp = cand[:-1], ctp[:-1]
        d, _ = tree.query(cand)
        j = int(np.argmax(d))
        r = float(d[j]) / reach
        worst_corr = max(worst_corr, (float(d.max()) + 0.5 * density) / max(reach - 0.5 * density, 1e-300))
        if r > best[0]:
            best = (r, cand[j].copy(), k, float(ctp[j]))
    if best[1] is None:
        raise GeometryError("no consecutive sample pairs to check")
    return SamplingReport(best[0], max(best[0], worst_corr), best[1], best[2], best[3], float(density), len(pairs), "rho")


def ground_truth_graph(curve, sample) -> ReconGraph:
    """Edges between parameter-consecutive samples of each component."""
    curve = make_curve(curve)
    s = as_sample(sample)
    if not s.tagged:
        raise GeometryError("ground_truth_graph needs component/parameter tags on the sample")
    for k in range(len(curve.components)):
        cnt = int(np.sum(s.components == k))
        if 0 < cnt < 3:
            raise GeometryError(f"component {k} has only {cnt} samples; need at least 3")
    edges = {(min(a, b), max(a, b)) for _, a, b, _, _ in _consecutive(curve, s)}
    return ReconGraph(n=s.n, edges=frozenset(edges))


def greedy_sample(curve, target_eps: float, seed: int = 0, safety: float = 0.95,
                  density: float | None = None) -> SampleSet:
    """Sparse tagged sample with measured eps_star below ``target_eps``.

    Each component is walked from a random start; every next sample is the
    farthest grid point such that each grid point in between stays within
    ``safety * target_eps`` of its lfs from one of the two bracketing samples.
    """
    curve = make_curve(curve)
    if not target_eps > 0:
        raise GeometryError("target_eps must be positive")
    if not 0 < safety < 1:
        raise GeometryError("safety must lie in (0, 1)")
    if density is None:
        density = default_density(curve)
    rng = np.random.default_rng(seed)
    starts = rng.random(len(curve.components))
    f = safety
    for _attempt in range(8):
        pts, comps, pars = [], [], []
        for k, c in enumerate(curve.components):
            t = _greedy_component(curve, k, c, f * target_eps, density, starts[k])
            pts.append(c.point_at(t))
            comps.append(np.full(len(t), k))
            pars.append(t)
        s = SampleSet(np.concatenate(pts), np.concatenate(comps), np.concatenate(pars))
        if epsilon_star(curve, s, density).eps_star < target_eps:
            return s
        f *= 0.97
    raise GeometryError(f"could not reach eps_star < {target_eps} at density {density}")


def _greedy_component(curve, k, c, limit, density, start_frac):
    W = max(int(math.ceil(c.length / density)), 8)
    if c.closed:
        t = np.arange(W) * (c.length / W)
    else:
        t = np.linspace(0.0, c.length, W + 1)
        W = len(t)
    G = c.point_at(t)
    lfs = curve.lfs(G, density, np.full(len(G), k))

    def span_ok(i, j):
        # grid indices i < j (j may exceed W on closed curves)
        m = np.arange(i, j + 1)
        Pm = G[m % W]
        d = np.minimum(np.linalg.norm(Pm - G[i % W], axis=1), np.linalg.norm(Pm - G[j % W], axis=1))
        return bool(np.all(d <= limit * lfs[m % W]))

    if c.closed:
        s0 = int(start_frac * W) % W
        end = s0 + W
    else:
        s0, end = 0, W - 1
    chosen = [s0]
    i = s0
    while True:
        if span_ok(i, end):
            break
        # galloping then binary search for the farthest feasible j
        step, lo = 1, i + 1
        while lo + step < end and span_ok(i, lo + step):
            step *= 2
        hi = min(lo + step, end)
        lo = i + 1 if not span_ok(i, i + 1) else lo
        if not span_ok(i, lo):
            raise GeometryError("target infeasible at this density: adjacent grid points already violate it")
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if span_ok(i, mid):
                lo = mid
            else:
                hi = mid
        i = lo
        chosen.append(i)
    if not c.closed and chosen[-1] != end:
        chosen.append(end)
    tt = np.sort(np.mod(np.array(chosen), W) if c.closed else np.array(chosen))
    return np.unique(t[tt])


# ---------------------------------------------------------------- hook fixture

def hook_midpoint_ratio(x: float, curve=None, density: float = 1e-4) -> float:
    """eps_star on the stretch [a, p] of the hook for S = {a=(0,0), p=(x,0)}."""
    from .curves import hook

    curve = curve or hook()
    s = SampleSet(np.array([[0.0, 0.0], [x, 0.0]]), [0, 0], [0.0, x])
    return epsilon_star(curve, s, density, spans=[(0, 0.0, x)]).eps_star


def hook_reach_ratio(x: float, curve=None, density: float = 1e-4) -> float:
    """rho_star of the pair a -> p on the hook for S = {a=(0,0), p=(x,0)}."""
    from .curves import hook

    curve = curve or hook()
    s = SampleSet(np.array([[0.0, 0.0], [x, 0.0]]), [0, 0], [0.0, x])
    return rho_star(curve, s, density).eps_star
