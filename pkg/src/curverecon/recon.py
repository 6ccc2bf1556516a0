"""Curve reconstruction from point samples.

Each vertex is joined to its nearest neighbour and to the nearest point that
forms a compatible triple with that neighbour.  ``nn_compatible`` scans all
points (any dimension, O(n^2)); ``compatible_crust`` only looks at Delaunay
neighbours (planar, O(n log n)).  ``nn_crust_baseline`` is the classical
nearest-neighbour crust with the obtuse-angle rule, kept for comparison.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .delaunay import check_duplicates, triangulate
from .geom import CompatParams, GeometryError, compat_margin_batch
from .samples import SampleSet, as_sample
from .spatial import SpatialIndex


@dataclass(frozen=True)
class ReconGraph:
    n: int
    edges: frozenset
    # vertices for which no compatible neighbour existed (invalid sample)
    flagged: tuple = field(default=())

    def __post_init__(self):
        es = set()
        for e in self.edges:
            i, j = (int(v) for v in e)
            if i == j:
                raise GeometryError(f"self-loop at vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise GeometryError(f"edge ({i}, {j}) out of range for n={self.n}")
            es.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(es))
        object.__setattr__(self, "flagged", tuple(sorted(int(v) for v in self.flagged)))

    @property
    def is_flagged(self) -> bool:
        return bool(self.flagged)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def components(self) -> list[list[int]]:
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, j in self.edges:
            parent[find(i)] = find(j)
        groups: dict[int, list[int]] = {}
        for v in range(self.n):
            groups.setdefault(find(v), []).append(v)
        return sorted(groups.values())

    def is_cycle_union(self) -> bool:
        return self.n > 0 and bool(np.all(self.degrees() == 2))


def graph_diff(g1: ReconGraph, g2: ReconGraph) -> tuple[set, set]:
    if g1.n != g2.n:
        raise GeometryError(f"vertex count mismatch: {g1.n} vs {g2.n}")
    return set(g1.edges - g2.edges), set(g2.edges - g1.edges)


def graph_equal(g1: ReconGraph, g2: ReconGraph) -> bool:
    a, b = graph_diff(g1, g2)
    return not a and not b


def _prepare(sample) -> np.ndarray:
    s = as_sample(sample)
    if s.n < 3:
        raise GeometryError("need at least 3 points")
    P = np.ascontiguousarray(s.points)
    check_duplicates(P)
    return P


def _assemble(n, closest, clcomp) -> ReconGraph:
    x = np.arange(n)
    closest = np.asarray(closest, dtype=np.int64)
    clcomp = np.asarray(clcomp, dtype=np.int64)
    ok = clcomp >= 0
    src = np.concatenate([x, x[ok]])
    dst = np.concatenate([closest, clcomp[ok]])
    # one int64 key per edge; a 1-D sort is much cheaper than unique(axis=0)
    key = np.unique(np.minimum(src, dst) * n + np.maximum(src, dst))
    e = zip((key // n).tolist(), (key % n).tolist())
    return ReconGraph(n=n, edges=frozenset(e), flagged=tuple(np.flatnonzero(~ok).tolist()))


def _nearest_compatible(P, x, a, cand, params) -> int:
    """Nearest candidate y with (a, x, y) compatible; lowest index on ties."""
    cand = cand[(cand != x) & (cand != a)]
    if len(cand) == 0:
        return -1
    ok = compat_margin_batch(P[a][None, :], P[x][None, :], P[cand], params) > 0.0
    if not np.any(ok):
        return -1
    good = cand[ok]
    diff = P[good] - P[x]
    d2 = np.einsum("ij,ij->i", diff, diff)
    best = d2.min()
    return int(good[d2 == best].min())


def nn_compatible(sample, params: CompatParams = CompatParams(), backend: str | None = "auto") -> ReconGraph:
    P = _prepare(sample)
    n = len(P)
    index = SpatialIndex(P)
    closest = index.nearest_other()
    core = _backend.resolve(backend)
    if core is not None:
        clcomp = core.nn_compat_scan(P, closest, params.k, params.base_angle, index.seeds(8))
    else:
        everyone = np.arange(n)
        clcomp = np.array([_nearest_compatible(P, x, int(closest[x]), everyone, params) for x in range(n)])
    return _assemble(n, closest, clcomp)


def compatible_crust(sample, params: CompatParams = CompatParams(), backend: str | None = "auto") -> ReconGraph:
    P = _prepare(sample)
    if P.shape[1] != 2:
        raise GeometryError(f"compatible_crust works in the plane only; got dimension {P.shape[1]}")
    T = triangulate(P, backend=backend)
    indptr, indices = T.adjacency()
    n = len(P)
    core = _backend.resolve(backend)
    if core is not None:
        closest, clcomp = core.crust_scan(P, indptr, indices, params.k, params.base_angle)
    else:
        closest = np.empty(n, dtype=np.int64)
        clcomp = np.empty(n, dtype=np.int64)
        for x in range(n):
            nb = indices[indptr[x]:indptr[x + 1]].astype(np.int64)
            diff = P[nb] - P[x]
            d2 = np.einsum("ij,ij->i", diff, diff)
            a = int(nb[d2 == d2.min()].min())
            closest[x] = a
            clcomp[x] = _nearest_compatible(P, x, a, nb, params)
    return _assemble(n, closest, clcomp)


def nn_crust_baseline(sample) -> ReconGraph:
    """Nearest neighbour, then the nearest point on the far side of it.

    The second edge goes to the nearest y with angle(p, x, y) > 90 degrees,
    where p is the nearest neighbour of x.
    """
    P = _prepare(sample)
    n = len(P)
    closest = SpatialIndex(P).nearest_other()
    half = np.full(n, -1, dtype=np.int64)
    for x in range(n):
        u = P[closest[x]] - P[x]
        v = P - P[x]
        ok = v @ u < 0.0
        ok[x] = False
        if np.any(ok):
            idx = np.flatnonzero(ok)
            d2 = np.einsum("ij,ij->i", v[idx], v[idx])
            half[x] = int(idx[d2 == d2.min()].min())
    return _assemble(n, closest, half)


ALGORITHMS = {
    "nn-compatible": nn_compatible,
    "compatible-crust": compatible_crust,
    "nn-crust": lambda s, params=None, backend=None: nn_crust_baseline(s),
}


def reconstruct(sample, algorithm: str = "nn-compatible", params: CompatParams = CompatParams(),
                backend: str | None = "auto") -> ReconGraph:
    try:
        fn = ALGORITHMS[algorithm]
    except KeyError:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose from {sorted(ALGORITHMS)}") from None
    return fn(sample, params, backend)
