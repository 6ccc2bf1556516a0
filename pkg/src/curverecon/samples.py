"""Point samples with optional curve-parameter tags."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geom import GeometryError


@dataclass(frozen=True)
class SampleSet:
    points: np.ndarray  # (n, d) float64
    components: np.ndarray | None = None  # (n,) int
    params: np.ndarray | None = None  # (n,) arc-length parameter within the component

    def __post_init__(self):
        P = np.array(self.points, dtype=np.float64)
        if P.ndim != 2 or P.shape[1] < 2:
            raise GeometryError(f"points must be an (n, d) array with d >= 2, got shape {P.shape}")
        if not np.all(np.isfinite(P)):
            raise GeometryError("point coordinates must be finite")
        P.setflags(write=False)
        object.__setattr__(self, "points", P)
        if (self.components is None) != (self.params is None):
            raise GeometryError("component and parameter tags must be given together")
        if self.components is not None:
            comp = np.array(self.components, dtype=np.int64)
            par = np.array(self.params, dtype=np.float64)
            if comp.shape != (len(P),) or par.shape != (len(P),):
                raise GeometryError("tag arrays must have one entry per point")
            comp.setflags(write=False)
            par.setflags(write=False)
            object.__setattr__(self, "components", comp)
            object.__setattr__(self, "params", par)

    @property
    def n(self) -> int:
        return int(self.points.shape[0])

    @property
    def dim(self) -> int:
        return int(self.points.shape[1])

    @property
    def tagged(self) -> bool:
        return self.components is not None

    def __len__(self):
        return self.n


def as_sample(sample) -> SampleSet:
    return sample if isinstance(sample, SampleSet) else SampleSet(np.asarray(sample, dtype=np.float64))
