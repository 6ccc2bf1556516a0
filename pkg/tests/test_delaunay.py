import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from curverecon import _backend
from curverecon.delaunay import insertion_order, triangulate
from curverecon.geom import GeometryError
from curverecon.predicates import incircle_exact, orient2d_exact

backends = ["python"] + (["cython"] if _backend.core is not None else [])


def assert_delaunay(T):
    P = T.points
    for a, b, c in T.triangles:
        assert orient2d_exact(P[a], P[b], P[c]) == 1
        others = np.setdiff1d(np.arange(len(P)), [a, b, c])
        assert all(incircle_exact(P[a], P[b], P[c], P[d]) <= 0 for d in others)


def euler_counts(T):
    # every point on the hull boundary counts, collinear ones included
    eq = ConvexHull(T.points).equations
    h = int(np.sum(np.any(np.abs(T.points @ eq[:, :2].T + eq[:, 2]) < 1e-9, axis=1)))
    n = T.n
    return len(T.triangles) == 2 * n - 2 - h and len(T.edges) == 3 * n - 3 - h


@pytest.mark.parametrize("backend", backends)
def test_random_points_empty_circles(backend):
    P = np.random.default_rng(0).uniform(size=(120, 2))
    T = triangulate(P, backend=backend)
    assert_delaunay(T)
    assert euler_counts(T)


@pytest.mark.parametrize("backend", backends)
def test_cocircular_grid_is_canonical(backend):
    # a square grid is fully degenerate: every cell is cocircular
    g = np.stack(np.meshgrid(np.arange(6.0), np.arange(5.0)), -1).reshape(-1, 2)
    results = [triangulate(g, backend=backend, seed=s).triangles for s in range(4)]
    for r in results[1:]:
        assert np.array_equal(r, results[0])
    T = triangulate(g, backend=backend)
    assert len(T.triangles) == 2 * 5 * 4


def test_backends_agree():
    if len(backends) < 2:
        pytest.skip("compiled core not built")
    rng = np.random.default_rng(3)
    for P in (rng.uniform(size=(300, 2)), np.round(rng.uniform(size=(300, 2)) * 8) / 8):
        P = np.unique(P, axis=0)
        a = triangulate(P, backend="python")
        b = triangulate(P, backend="cython")
        assert np.array_equal(a.triangles, b.triangles)


def test_circle_points_are_consecutive_edges():
    th = 2 * np.pi * np.arange(40) / 40
    T = triangulate(np.stack([np.cos(th), np.sin(th)], 1))
    for i in range(40):
        assert (min(i, (i + 1) % 40), max(i, (i + 1) % 40)) in T.edges


def test_input_errors():
    with pytest.raises(GeometryError):
        triangulate([[0, 0], [1, 1]])
    with pytest.raises(GeometryError):
        triangulate([[0, 0], [1, 1], [2, 2], [3, 3]])
    with pytest.raises(GeometryError):
        triangulate([[0, 0], [1, 0], [0, 1], [1, 0]])
    with pytest.raises(GeometryError):
        triangulate(np.zeros((4, 3)))


def test_insertion_order_is_permutation():
    P = np.random.default_rng(0).uniform(size=(500, 2))
    o = insertion_order(P, seed=7)
    assert sorted(o.tolist()) == list(range(500))
    assert np.array_equal(o, insertion_order(P, seed=7))


@given(st.lists(st.tuples(st.integers(0, 12), st.integers(0, 12)), min_size=3, max_size=40, unique=True))
def test_small_integer_sets(pts):
    P = np.array(pts, dtype=float)
    if np.linalg.matrix_rank(P[1:] - P[0]) < 2:
        with pytest.raises(GeometryError):
            triangulate(P)
        return
    T = triangulate(P)
    assert_delaunay(T)
    assert euler_counts(T)
    if _backend.core is not None:
        assert np.array_equal(T.triangles, triangulate(P, backend="python").triangles)
