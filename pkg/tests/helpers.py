"""Shared fixtures and lemma checks for the test suite."""
from functools import lru_cache

import math

import numpy as np
from scipy.spatial import cKDTree

from curverecon import circle, concentric, ellipse, epsilon_star, greedy_sample, ground_truth_graph
from curverecon.delaunay import triangulate
from curverecon.gadget import gadget_loop
from curverecon.geom import CompatParams, is_compatible, xab_witness
from curverecon.sampling import _bisector_points, _consecutive

EPS = 0.66


@lru_cache(maxsize=None)
def family(name):
    return {
        "circle": lambda: circle(),
        "ellipse": lambda: ellipse((0.0, 0.0), 2.0, 1.0),
        "nested": lambda: concentric((0.0, 0.0), (1.0, 3.0)),
        "gadget": gadget_loop,
    }[name]()


FAMILIES = ("circle", "ellipse", "nested", "gadget")


@lru_cache(maxsize=None)
def valid_sample(name, seed):
    """Greedy sample with safety spread over seeds so sizes vary."""
    curve = family(name)
    safety = 0.55 + 0.4 * ((seed * 0.618034) % 1.0)
    s = greedy_sample(curve, EPS, seed=seed, safety=safety)
    return s, epsilon_star(curve, s).eps_star


def triples(curve, s):
    """Consecutive triples a -> b -> c per component."""
    out = []
    pairs = _consecutive(curve, s)
    nxt = {a: b for _, a, b, _, _ in pairs}
    for _, a, b, _, _ in pairs:
        if b in nxt:
            out.append((a, b, nxt[b]))
    return out


def dense(curve, step=2e-3):
    return curve.discretize(step)


def _between(t, ta, tb, length):
    return np.mod(t - ta, length) < np.mod(tb - ta, length)


def _angles(p, b, Q):
    """Angle p-b-q in degrees for each row q of Q."""
    u = (p - b) / np.linalg.norm(p - b)
    V = Q - b
    V = V / np.linalg.norm(V, axis=1, keepdims=True)
    return np.degrees(np.arctan2(np.abs(u[0] * V[:, 1] - u[1] * V[:, 0]), V @ u))


def lemma_violations(curve, s):
    """Counts of violated lemma statements on one valid sample."""
    v = dict.fromkeys(["dichotomy", "closest", "compatible", "angle141", "angle117", "delaunay", "U"], 0)
    P = s.points
    G, gc, gp = dense(curve)
    tree = cKDTree(P)
    pairs = _consecutive(curve, s)
    mids, _, _ = _bisector_points(curve, s, pairs)
    lengths = curve.lengths
    truth = ground_truth_graph(curve, s).edges

    # nearest sample to an arc point is one of the arc's end samples
    _, nearest = tree.query(G)
    d_near = np.linalg.norm(G - P[nearest], axis=1)
    for k, a, b, ta, tb in pairs:
        # open arc (a, b): drop grid points that coincide with a or b
        m = (gc == k) & _between(gp, ta, tb, lengths[k])
        m &= (np.linalg.norm(G - P[a], axis=1) > 1e-9) & (np.linalg.norm(G - P[b], axis=1) > 1e-9)
        if not np.any(m):
            continue
        da = np.linalg.norm(G[m] - P[a], axis=1)
        db = np.linalg.norm(G[m] - P[b], axis=1)
        v["dichotomy"] += int(np.sum(np.minimum(da, db) > d_near[m] * (1 + 1e-12)))
        # arc points lie in every ball B_x(d(x,a)), x in X(a,b)
        dab = np.linalg.norm(P[a] - P[b])
        r = dab / (EPS * np.sqrt(4 - EPS * EPS))
        h = np.sqrt(r * r - dab * dab / 4)
        mid = 0.5 * (P[a] + P[b])
        nrm = np.array([-(P[b] - P[a])[1], (P[b] - P[a])[0]]) / dab
        for x in (mid + h * nrm, mid - h * nrm):
            v["U"] += int(np.sum(np.linalg.norm(G[m] - x, axis=1) >= r))

    # the nearest other sample is consecutive
    _, nn = tree.query(P, k=2)
    for i, j in enumerate(nn[:, 1]):
        if (min(i, j), max(i, j)) not in truth:
            v["closest"] += 1

    params = CompatParams(EPS)
    mid_of = {(a, b): t for (_, a, b, _, _), t in zip(pairs, mids)}
    par_of = {(a, b): (k, ta, tb) for k, a, b, ta, tb in pairs}
    for a, b, c in triples(curve, s):
        if not is_compatible(P[a], P[b], P[c], params):
            v["compatible"] += 1
        p = mid_of[(a, b)]
        dpb = np.linalg.norm(p - P[b])
        # q in (b, c] no farther from b than p
        k, tb, tc = par_of[(b, c)]
        m = (gc == k) & _between(gp, tb, tc, lengths[k]) & (np.linalg.norm(G - P[b], axis=1) <= dpb)
        m &= np.linalg.norm(G - P[b], axis=1) > 1e-9
        v["angle141"] += int(np.sum(_angles(p, P[b], G[m]) <= 141.0))
        # any curve point off [a, b] within d(a, b) of b
        k, ta, _ = par_of[(a, b)]
        on_ab = (gc == k) & (np.mod(gp - ta, lengths[k]) <= np.mod(par_of[(a, b)][2] - ta, lengths[k]))
        dab = np.linalg.norm(P[a] - P[b])
        db = np.linalg.norm(G - P[b], axis=1)
        m = ~on_ab & (db <= dab) & (db > 1e-9) & (np.linalg.norm(G - P[a], axis=1) > 1e-9)
        v["angle117"] += int(np.sum(_angles(p, P[b], G[m]) <= 117.3))

    # ground-truth edges are Delaunay edges
    T = triangulate(P)
    indptr, indices = T.adjacency()
    for i, j in truth:
        if j not in indices[indptr[i]:indptr[i + 1]]:
            v["delaunay"] += 1
    return v


def witness_in_plane(a, b, c):
    return xab_witness(a, b, c, CompatParams(EPS))


def ball_oracle(a, b, c, eps, n_witness=256, rng=None):
    """Ball-membership check on a discretised X(a,b) and X(b,c), vectorised
    over rows.  Each X is sampled on the circle through the in-plane
    witness and a random orthogonal direction."""
    rng = rng or np.random.default_rng(0)
    t = 2 * np.pi * np.arange(n_witness) / n_witness

    def witnesses(p, q, r):
        axis = q - p
        dpq = np.linalg.norm(axis, axis=1)
        axis = axis / dpq[:, None]
        mid = 0.5 * (p + q)
        w = (r - mid) - np.sum((r - mid) * axis, axis=1)[:, None] * axis
        n1 = w / np.linalg.norm(w, axis=1)[:, None]
        rad = dpq / (eps * math.sqrt(4 - eps * eps))
        h = np.sqrt(rad ** 2 - dpq ** 2 / 4)
        if p.shape[1] == 2:
            return mid[:, None, :] + h[:, None, None] * np.stack([n1, -n1], axis=1)
        z = rng.standard_normal(p.shape)
        z -= np.sum(z * axis, axis=1)[:, None] * axis + np.sum(z * n1, axis=1)[:, None] * n1
        n2 = z / np.linalg.norm(z, axis=1)[:, None]
        dirs = np.cos(t)[None, :, None] * n1[:, None, :] + np.sin(t)[None, :, None] * n2[:, None, :]
        return mid[:, None, :] + h[:, None, None] * dirs

    X = witnesses(a, b, c)
    ok = np.all(np.linalg.norm(X - c[:, None], axis=2) > np.linalg.norm(X - b[:, None], axis=2), axis=1)
    Y = witnesses(c, b, a)
    ok &= np.all(np.linalg.norm(Y - a[:, None], axis=2) > np.linalg.norm(Y - b[:, None], axis=2), axis=1)
    return ok
