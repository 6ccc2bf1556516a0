import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from curverecon.geom import (CompatParams, GeometryError, angle, angle_deg, compat_margin, compat_margin_batch,
                             compat_threshold, distance, is_compatible, is_compatible_oracle, xab_radius,
                             xab_witness)
from helpers import ball_oracle

coord = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
pt2 = st.tuples(coord, coord)


def test_distance_and_angle():
    assert distance((0, 0), (3, 4)) == 5.0
    assert angle_deg((1, 0), (0, 0), (0, 1)) == pytest.approx(90.0)
    assert angle((1, 0), (0, 0), (-1, 0)) == pytest.approx(math.pi)
    with pytest.raises(GeometryError):
        angle((0, 0), (0, 0), (1, 0))
    with pytest.raises(GeometryError):
        distance((0, 0), (0, 0, 0))


def test_params_validation():
    assert CompatParams().epsilon == 0.66
    for bad in (0.0, -0.1, 1.5):
        with pytest.raises(GeometryError):
            CompatParams(bad)
    assert CompatParams(0.66).k == pytest.approx(0.62303, abs=1e-5)


def test_xab_radius_and_witness():
    a, b = np.array([0.0, -1.0]), np.array([0.0, 0.0])
    r = xab_radius(a, b)
    assert r == pytest.approx(1 / (0.66 * math.sqrt(4 - 0.66 ** 2)))
    x = xab_witness(a, b, (1.0, 0.5))
    assert distance(x, a) == pytest.approx(r)
    assert distance(x, b) == pytest.approx(r)
    assert x[0] > 0
    with pytest.raises(GeometryError):
        xab_witness(a, a, (1.0, 0.0))


def test_flip_angle_equal_lengths():
    p = CompatParams(0.66)
    thr = math.degrees(compat_threshold(1.0, 1.0, p))
    assert thr == pytest.approx(2 * math.degrees(math.acos(0.62304)), abs=0.01)
    assert thr == pytest.approx(102.93, abs=0.01)
    assert thr > 102.9
    # just below and just above the flip for unit legs
    for delta, expect in ((-1e-4, False), (1e-4, True)):
        th = math.radians(thr + delta)
        c = (math.sin(th), -math.cos(th))
        assert is_compatible((0, -1), (0, 0), c, p) is expect


def test_far_point_clamp():
    # c beyond the witness-ball diameter: only the a-side condition binds
    p = CompatParams(0.66)
    assert compat_threshold(1.0, 10.0, p) == pytest.approx(math.acos(p.k) + math.acos(p.k / 10.0))


@pytest.mark.parametrize("dim", [2, 3, 5])
def test_closed_form_matches_library_oracle(dim):
    rng = np.random.default_rng(dim)
    agree = 0
    for _ in range(400):
        a, b, c = rng.uniform(-1, 1, (3, dim))
        m = compat_margin(a, b, c)
        if abs(math.degrees(m)) < 1e-6:
            continue
        assert is_compatible(a, b, c) == is_compatible_oracle(a, b, c)
        agree += 1
    assert agree > 390


@pytest.mark.parametrize("dim", [2, 3, 5])
def test_closed_form_matches_ball_oracle(dim):
    rng = np.random.default_rng(10 + dim)
    a, b, c = (rng.uniform(-1, 1, (5000, dim)) for _ in range(3))
    m = compat_margin_batch(a, b, c)
    keep = np.abs(np.degrees(m)) > 1e-6
    assert np.array_equal((m > 0)[keep], ball_oracle(a, b, c, 0.66)[keep])


def test_batch_matches_scalar():
    rng = np.random.default_rng(1)
    a, b, c = (rng.normal(size=(300, 3)) for _ in range(3))
    batch = compat_margin_batch(a, b, c)
    for i in range(300):
        assert batch[i] == pytest.approx(compat_margin(a[i], b[i], c[i]), abs=1e-12)


@given(pt2, pt2, pt2)
def test_compatibility_symmetric(a, b, c):
    a, b, c = map(np.array, (a, b, c))
    if min(np.linalg.norm(a - b), np.linalg.norm(b - c), np.linalg.norm(a - c)) < 1e-3:
        return
    if abs(math.degrees(compat_margin(a, b, c))) < 1e-6:
        return
    assert is_compatible(a, b, c) == is_compatible(c, b, a)


@given(pt2, pt2, pt2, st.floats(0.01, 100), st.floats(-math.pi, math.pi), pt2)
def test_compatibility_similarity_invariant(a, b, c, s, th, shift):
    a, b, c = map(np.array, (a, b, c))
    if min(np.linalg.norm(a - b), np.linalg.norm(b - c), np.linalg.norm(a - c)) < 1e-3:
        return
    m = compat_margin(a, b, c)
    if abs(m) < 1e-7:
        return
    R = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
    f = lambda p: s * (R @ p) + np.array(shift)
    assert is_compatible(f(a), f(b), f(c)) == (m > 0)


@given(st.floats(0.05, 20), st.floats(0.05, 20), st.floats(0.1, 1.4))
def test_compatible_angle_exceeds_flip(dab, dcb, eps):
    # the threshold is smallest for equal legs
    p = CompatParams(eps)
    assert compat_threshold(dab, dcb, p) >= 2 * math.acos(p.k) - 1e-12


def test_degenerate_inputs():
    with pytest.raises(GeometryError):
        is_compatible((0, 0), (0, 0), (1, 1))
    with pytest.raises(GeometryError):
        is_compatible_oracle((0, 0), (1, 0), (0, 0))
    with pytest.raises(GeometryError):
        is_compatible_oracle((0, 0), (1, 0), (2, 1), n_witness=1)


def test_fixture_values():
    # d(b, c) for b = (0, 0); the value is 1.180280, so the tolerance is 2e-5
    assert distance((0, 0), (-1.008, 0.614)) == pytest.approx(1.18029, abs=2e-5)
    assert angle_deg((0, -1), (0, 0), (1.777, 0.9173)) == pytest.approx(117.3, abs=0.1)
    # quoted radii are 0.80252 and 1.60505; the exact values are 0.802533 and 1.605066
    assert xab_radius((0, 0), (1, 0)) == pytest.approx(0.80252, abs=2e-5)
    assert xab_radius((0, 0), (2, 0)) == pytest.approx(1.60505, abs=2e-5)
    assert xab_radius((0, 0), (2, 0)) == pytest.approx(2 / (0.66 * math.sqrt(4 - 0.66 ** 2)), rel=1e-14)
    assert xab_radius((0, 0), (1, 0), CompatParams(math.sqrt(2) - 1e-12)) == pytest.approx(0.5, abs=1e-6)
    assert np.allclose(xab_witness((0, -1), (0, 0), (1, 0)), (0.628, -0.5), atol=1e-3)
    assert np.allclose(xab_witness((0, -1), (0, 0), (-1, 0)), (-0.628, -0.5), atol=1e-3)
    h = math.sqrt(xab_radius((0, 0), (2, 0)) ** 2 - 1)
    assert np.allclose(xab_witness((0, 0), (2, 0), (1, 5)), (1, h), atol=1e-5)
