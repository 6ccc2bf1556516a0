import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from curverecon.curves import (Arc, Component, CurveModel, Ellipse, ExpBend, Line, Mapped, Rotated, circle,
                               concentric, ellipse, hook, lfs_numeric, make_curve)
from curverecon.gadget import base_gadget
from curverecon.geom import GeometryError


def numeric(curve):
    """Same geometry without the closed-form lfs."""
    return CurveModel(curve.components)


def test_circle_lfs():
    c = circle((1.0, 2.0), 3.0)
    assert len(c.components) == 1
    P = c.point_at(0, np.linspace(0, 5, 7))
    assert np.allclose(c.lfs(P), 3.0)
    assert lfs_numeric(c, P[0], 1e-3) == 3.0
    assert lfs_numeric(numeric(circle()), (1.0, 0.0), 1e-3) == pytest.approx(1.0, abs=1e-3)


def test_concentric_lfs():
    c = concentric((0, 0), (100.0, 102.0))
    P, _, _ = c.discretize(1.0)
    assert np.allclose(c.lfs(P), 1.0)
    small = numeric(concentric((0, 0), (1.0, 3.0)))
    assert lfs_numeric(small, (1.0, 0.0), 1e-3) == pytest.approx(1.0, abs=1e-3)
    assert lfs_numeric(small, (0.0, 3.0), 1e-3) == pytest.approx(1.0, abs=1e-3)


def test_ellipse_numeric_matches_closed_form():
    e = ellipse((0, 0), 2.0, 1.0)
    P, _, _ = e.discretize(0.05)
    num = numeric(e).lfs(P, 1e-3)
    assert np.max(np.abs(num - e.lfs(P))) < 1e-3


def test_gadget_lfs_near_first_circle():
    g = base_gadget()
    # the curve C on its own (the variant also holds the translated copy)
    curve = CurveModel(g.variants[0].components[:1])
    centre = np.array(g.construction_log["circles"]["S1"]["center"])
    r = g.construction_log["circles"]["S1"]["radius"]
    p = centre + np.array([r, 0.0])
    assert np.allclose(centre, (-0.65007, -0.5), atol=1e-5)
    assert lfs_numeric(curve, p, 1e-3) == pytest.approx(0.82011, abs=1e-3)


def test_off_curve_point_rejected():
    with pytest.raises(GeometryError, match="not on the curve"):
        lfs_numeric(circle(), (0.5, 0.0), 1e-3)


def test_chain_must_close():
    with pytest.raises(GeometryError, match="gap"):
        make_curve({"type": "arc_chain", "segments": [
            {"type": "arc", "center": [0, 0], "radius": 1.0, "start_angle": 0.0, "sweep": math.pi}]})


def test_tangent_jump_rejected():
    with pytest.raises(GeometryError, match="tangent"):
        Component((Line((0, 0), (1, 0)), Line((1, 0), (1, 1)), Line((1, 1), (0, 0))))


def test_bad_specs():
    with pytest.raises(GeometryError):
        make_curve({"type": "circle", "radius": -1})
    with pytest.raises(GeometryError):
        make_curve({"type": "spline"})
    with pytest.raises(GeometryError):
        Arc((0, 0), 0.0, 0.0, 1.0)
    with pytest.raises(GeometryError):
        concentric((0, 0), (2.0, 2.0))


def test_two_arc_chain_closes():
    # stadium: two half circles joined by straight sides
    segs = [Line((0, -1), (2, -1)), Arc((2, 0), 1.0, -math.pi / 2, math.pi),
            Line((2, 1), (0, 1)), Arc((0, 0), 1.0, math.pi / 2, math.pi)]
    c = make_curve({"type": "arc_chain", "segments": [s.to_json() for s in segs]})
    assert c.lengths[0] == pytest.approx(4 + 2 * math.pi)
    assert numeric(c).lfs(np.array([[1.0, -1.0]]), 1e-3)[0] == pytest.approx(1.0, abs=1e-3)


def test_json_round_trip():
    for c in (circle((0.1, 0.2), 0.3), ellipse(), concentric(), hook(), base_gadget().variants[0]):
        d = json.loads(json.dumps(c.to_json()))
        c2 = make_curve(d)
        t = np.linspace(0, c.lengths[0], 17)
        assert np.array_equal(c.point_at(0, t), c2.point_at(0, t))
        assert c2.lfs_model == c.lfs_model


def test_hook_is_open_with_idealised_lfs():
    h = hook(0.05)
    assert not h.is_closed
    assert h.lfs(np.array([[0.25, 0.0]]))[0] == pytest.approx(0.75)
    with pytest.raises(GeometryError):
        hook(0.0)


@given(st.floats(0.0, 1.0))
def test_arc_length_parameterisation(frac):
    for seg in (Line((0, 0), (3, 4)), Arc((1, 1), 2.0, 0.3, -2.0), Ellipse((0, 0), 2.0, 1.0)):
        s = frac * seg.length
        h = 1e-6
        if s + h > seg.length:
            s -= h
        v = (seg.point(np.array(s + h)) - seg.point(np.array(s))) / h
        assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-4)
        assert np.allclose(v / np.linalg.norm(v), seg.tangent(np.array(s)), atol=1e-4)


def test_projection_recovers_parameter():
    for seg in (Arc((1, 1), 2.0, 0.3, -2.0), Ellipse((0, 0), 2.0, 1.0)):
        s = np.linspace(0.1, seg.length - 0.1, 9)
        t, d = seg.project(seg.point(s))
        assert np.allclose(t, s, atol=1e-7)
        assert np.all(d < 1e-9)


def test_bent_segments():
    R = 50.0
    bend = ExpBend(R, 1)
    line = Line((0.0, 2.0), (3.0, 2.0))
    m = Mapped(line, bend)
    # a horizontal line maps to a circular arc of radius R exp(y/R)
    assert m.length == pytest.approx(3.0 * math.exp(2.0 / R), rel=1e-12)
    assert np.allclose(m.point(np.array(m.length)), bend(np.array(line.end)), atol=1e-12)
    assert np.linalg.norm(m.point(np.linspace(0, m.length, 5)), axis=1) == pytest.approx(R * math.exp(2 / R))
    s = np.linspace(0, m.length, 7)
    t, d = m.project(m.point(s))
    assert np.allclose(t, s, atol=1e-8) and np.all(d < 1e-9)
    inner = ExpBend(R, -1, 0.5)
    assert inner(np.array([0.0, 1.0]))[1] == pytest.approx(0.5 * R * math.exp(-1 / R))
    rot = Rotated(m, 0.25)
    p = rot.point(np.array(1.0))
    assert np.linalg.norm(p) == pytest.approx(np.linalg.norm(m.point(np.array(1.0))))
    seg = make_curve({"components": [{"closed": False, "segments": [rot.to_json()]}]}).components[0].segments[0]
    assert np.allclose(seg.point(np.array(1.0)), p)


def test_discretize_spacing():
    c = ellipse()
    P, cid, par = c.discretize(0.01)
    assert np.all(np.diff(par) <= 0.01 + 1e-12)
    with pytest.raises(GeometryError):
        c.discretize(0.0)
