"""Readers and writers for point CSV, curve JSON and edge files.

Floats are written with ``repr`` (shortest round-trip form), and every writer
goes through a temporary file and an atomic rename so a failed run leaves no
partial output behind.
"""
from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .curves import CurveModel, make_curve
from .geom import GeometryError
from .recon import ReconGraph
from .samples import SampleSet


class FormatError(GeometryError):
    pass


def _num(x) -> str:
    return repr(float(x))


def atomic_write(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        # mkstemp creates 0600; give the file the usual umask-derived mode
        mask = os.umask(0)
        os.umask(mask)
        os.chmod(tmp, 0o666 & ~mask)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------- points

def format_points(sample: SampleSet) -> str:
    lines = []
    P = sample.points
    for i in range(sample.n):
        row = [_num(v) for v in P[i]]
        if sample.tagged:
            row += [str(int(sample.components[i])), _num(sample.params[i])]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def parse_points(text: str, dim: int | None = None, source: str = "<input>") -> SampleSet:
    """Rows ``x,y[,z...][,component,param]``; ``#`` starts a comment.

    Without ``dim`` a row of n >= 4 columns is read as tagged when all rows
    have the same width and the second-to-last column is integral."""
    rows, lines = [], []
    for k, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            vals = [float(v) for v in line.split(",")]
        except ValueError:
            raise FormatError(f"{source}:{k}: malformed row {raw.strip()!r}") from None
        if len(vals) < 2:
            raise FormatError(f"{source}:{k}: need at least 2 coordinates, got {len(vals)}")
        if rows and len(vals) != len(rows[0]):
            raise FormatError(f"{source}:{k}: expected {len(rows[0])} columns, got {len(vals)}")
        if not all(np.isfinite(vals)):
            raise FormatError(f"{source}:{k}: non-finite value")
        rows.append(vals)
        lines.append(k)
    if not rows:
        return SampleSet(np.zeros((0, dim or 2)))
    A = np.array(rows, dtype=np.float64)
    width = A.shape[1]
    if dim is None:
        tagged = width >= 4 and np.all(A[:, -2] == np.round(A[:, -2])) and np.all(A[:, -2] >= 0)
        dim = width - 2 if tagged else width
    if width == dim:
        return SampleSet(A)
    if width != dim + 2:
        raise FormatError(f"{source}:{lines[0]}: expected {dim} or {dim + 2} columns, got {width}")
    comp = A[:, -2]
    bad = np.flatnonzero((comp != np.round(comp)) | (comp < 0))
    if len(bad):
        raise FormatError(f"{source}:{lines[bad[0]]}: component tag must be a non-negative integer")
    return SampleSet(A[:, :dim], comp.astype(np.int64), A[:, -1])


def write_points(path, sample: SampleSet) -> None:
    atomic_write(path, format_points(sample))


def read_points(path, dim: int | None = None) -> SampleSet:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {p}: {exc.strerror}") from None
    return parse_points(text, dim, str(p))


# ---------------------------------------------------------------- edges

def format_edges(graph: ReconGraph) -> str:
    return "".join(f"{i} {j}\n" for i, j in graph.sorted_edges())


def parse_edges(text: str, n: int, source: str = "<input>") -> ReconGraph:
    edges = []
    for k, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2 or not all(p.lstrip("-").isdigit() for p in parts):
            raise FormatError(f"{source}:{k}: expected 'i j', got {raw.strip()!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return ReconGraph(n, frozenset(edges))


def write_edges(path, graph: ReconGraph) -> None:
    atomic_write(path, format_edges(graph))


def read_edges(path, n: int) -> ReconGraph:
    p = Path(path)
    return parse_edges(p.read_text(), n, str(p))


# ---------------------------------------------------------------- json

class _Encoder(json.JSONEncoder):
    def default(self, o):
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, np.generic):
            return o.item()
        return super().default(o)


def dumps(obj) -> str:
    # json writes floats with repr, so values round-trip exactly
    return json.dumps(obj, cls=_Encoder, indent=1, sort_keys=True) + "\n"


def write_json(path, obj) -> None:
    atomic_write(path, dumps(obj))


def read_json(path):
    p = Path(path)
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{p}:{exc.lineno}: invalid JSON ({exc.msg})") from None


def write_curve(path, curve: CurveModel) -> None:
    write_json(path, curve.to_json())


def read_curve(path) -> CurveModel:
    return make_curve(read_json(path))
