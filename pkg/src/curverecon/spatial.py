"""Nearest-neighbour queries over a k-d tree with exact lowest-index ties."""
from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree


class SpatialIndex:
    def __init__(self, points):
        self.points = np.ascontiguousarray(points, dtype=np.float64)
        self.tree = cKDTree(self.points)

    def _sqdist(self, i: int, js) -> np.ndarray:
        diff = self.points[js] - self.points[i]
        return np.einsum("ij,ij->i", diff, diff)

    def nearest_other(self) -> np.ndarray:
        """Index of the nearest other point for every point.

        Tree candidates are re-ranked by exact squared distance with the
        lowest index winning ties, so the answer equals a brute-force scan.
        Rows whose candidate list may be cut inside a tie fall back to a
        ball query.
        """
        n = len(self.points)
        k = min(5, n)
        _, idx = self.tree.query(self.points, k=k)
        idx = np.asarray(idx).reshape(n, k)
        diff = self.points[idx] - self.points[:, None, :]
        d2 = np.einsum("ijk,ijk->ij", diff, diff)
        d2[idx == np.arange(n)[:, None]] = np.inf
        dmin = d2.min(axis=1)
        tied = d2 <= dmin[:, None]
        out = np.where(tied, idx, n).min(axis=1).astype(np.int32)
        # a tie may continue past the k-th candidate
        loose = np.flatnonzero(d2[:, -1] <= dmin * (1.0 + 1e-9)) if k < n else []
        for i in loose:
            js = np.array(sorted(j for j in self.tree.query_ball_point(
                self.points[i], np.sqrt(dmin[i]) * (1.0 + 1e-9) + 1e-300) if j != i), dtype=np.int64)
            dd = self._sqdist(i, js)
            out[i] = js[dd == dd.min()].min()
        return out

    def seeds(self, k: int) -> np.ndarray:
        """The k nearest other points of every point, -1 padded (int32)."""
        n = len(self.points)
        kk = min(k + 1, n)
        _, idx = self.tree.query(self.points, k=kk)
        idx = np.asarray(idx).reshape(n, kk)[:, 1:]
        return np.ascontiguousarray(np.where(idx >= n, -1, idx), dtype=np.int32)

    def query(self, p, k: int = 1):
        return self.tree.query(np.asarray(p, dtype=np.float64), k=k)
