import itertools
import json
import math

import numpy as np
import pytest

from curverecon.curves import make_curve
from curverecon.gadget import (EPS, K_STAR, PER_PERIOD, SHIFT, TIED_VARIANTS, annulus, annulus_eps, annulus_gadget,
                               base_gadget, extend_gadget, perturbed_gadget, revolve, revolve_min_m,
                               revolve_spacing_ok, strip, tied_annuli, tied_annuli_gadget, verify_gadget)
from curverecon.geom import GeometryError, distance
from curverecon.recon import nn_compatible

SMALL_K = 16


@pytest.fixture(scope="module")
def tied_small():
    return tied_annuli_gadget(SMALL_K)


def interpolates(g, tol=1e-9):
    # evaluate each variant at the recorded tags of every point
    for curve, tagged in zip(g.variants, g.tagged):
        for c in np.unique(tagged.components):
            sel = tagged.components == c
            if np.abs(curve.point_at(int(c), tagged.params[sel]) - g.points[sel]).max() > tol:
                return False
    return True


def c1_joints(curve, tol=1e-9):
    for comp in curve.components:
        segs = comp.segments
        pairs = list(zip(segs[:-1], segs[1:])) + ([(segs[-1], segs[0])] if comp.closed else [])
        for s, t in pairs:
            u = s.tangent(np.array(s.length))
            v = t.tangent(np.array(0.0))
            if np.linalg.norm(u - v) > tol:
                return False
    return True


def test_base_points_and_circles():
    g = base_gadget()
    a, b, c, d = g.points[:4]
    assert np.allclose(g.points[:4], [(0, -1), (0, 0), (-1.008, 0.614), (-1.008, 1.614)])
    assert distance(b, c) == pytest.approx(1.18028, abs=1e-5)
    # the copy is placed so that d(b, c') = d(b, c)
    assert distance(b, g.points[6]) == pytest.approx(distance(b, c), abs=1e-12)
    assert SHIFT == pytest.approx(2.016)
    assert g.construction_log["shift - figure offset"] == pytest.approx(0.001)
    s1 = g.construction_log["circles"]["S1"]
    assert s1["radius"] == pytest.approx(0.82011, abs=1e-5)
    assert s1["radius"] > 0.82
    assert np.allclose(s1["center"], (-0.65007, -0.5), atol=1e-5)
    assert np.allclose(g.construction_log["q"], (-0.504, 0.307))
    assert g.construction_log["d(q,b)"] == pytest.approx(0.59014, abs=1e-5)
    assert interpolates(g) and c1_joints(g.variants[0])


def test_base_margins():
    g = base_gadget()
    rep = verify_gadget(g)
    assert len(rep.margins) == 6
    assert rep.ok
    q = [m for m in rep.margins if np.allclose(m["t"], (-0.504, 0.307), atol=1e-9)]
    assert len(q) == 1
    assert q[0]["margin"] == pytest.approx(0.82011 - 0.59014 / 0.72, abs=2e-5)
    assert rep.min_margin == pytest.approx(4.7e-4, abs=1e-5)


def test_perturbed_gadget_fails():
    rep = verify_gadget(perturbed_gadget(0.1))
    assert rep.min_margin < 0 and not rep.ok


def test_extension():
    g = extend_gadget(base_gadget())
    log = g.construction_log
    assert len(g.points) == 16
    assert log["circles"]["S3"]["radius"] == pytest.approx(log["d_r"] / EPS, rel=1e-12)
    assert log["d_s"] < log["d_r"]
    assert np.allclose(log["tangent at f"], (0, 1), atol=1e-9)
    assert interpolates(g) and c1_joints(g.variants[0])
    assert verify_gadget(g).ok
    with pytest.raises(GeometryError):
        extend_gadget(g)


def test_strip_one_period():
    g = strip(1)
    assert len(g.points) == PER_PERIOD
    assert g.ground_truth(0) != g.ground_truth(1)
    assert interpolates(g) and all(c1_joints(v) for v in g.variants)
    rep = verify_gadget(g)
    assert rep.ok and max(rep.eps_star) <= EPS
    assert len(strip(3).points) == 3 * PER_PERIOD
    with pytest.raises(GeometryError):
        strip(0)


def test_annulus_below_threshold_and_decreasing():
    # measured eps_star shrinks with k toward the flat value, and small rings are rejected
    e64, e256 = annulus_eps(64, 1), annulus_eps(256, 1)
    assert e256 < e64
    assert e256 > 0.7195
    with pytest.raises(GeometryError, match="eps_star 0.7338"):
        annulus(64, 1)
    (s1, c1), (s2, c2) = annulus(64, 1, check=False), annulus(64, 2, check=False)
    assert np.array_equal(s1.points, s2.points)
    assert len(c1.components) == 64


def test_annulus_at_chosen_k_verifies():
    rep = verify_gadget(annulus_gadget(K_STAR))
    assert rep.ok
    assert rep.min_margin > 0 and max(rep.eps_star) <= EPS


def test_tied_structure(tied_small):
    g = tied_small
    assert g.components == [1, 1, SMALL_K, SMALL_K]
    assert interpolates(g) and all(c1_joints(v) for v in g.variants)
    truths = [g.ground_truth(i) for i in range(4)]
    for t in truths:
        assert t.is_cycle_union()
    for i, j in itertools.combinations(range(4), 2):
        assert truths[i] != truths[j]
    s, c = tied_annuli(3, SMALL_K)
    assert np.array_equal(s.points, g.points)
    with pytest.raises(GeometryError):
        tied_annuli(5, SMALL_K)
    assert set(TIED_VARIANTS) == {1, 2, 3, 4}


def test_tied_needs_room_for_ties():
    with pytest.raises(GeometryError, match="no room"):
        tied_annuli_gadget(8)


def test_generator_round_trip(tied_small):
    c = tied_small.variants[1]
    d = json.loads(json.dumps(c.to_json()))
    assert d == {"generator": {"type": "tied_annuli", "periods": SMALL_K, "variant": 2}}
    c2 = make_curve(d)
    t = np.linspace(0, c.lengths[0], 11)
    assert np.array_equal(c.point_at(0, t), c2.point_at(0, t))
    assert len(c.to_json(expand=True)["components"]) == 1
    with pytest.raises(GeometryError):
        make_curve({"generator": {"type": "spiral"}})


def test_nn_compatible_on_tied_set_is_degree_two(tied_small):
    # the algorithm cannot pick a variant, but every point should still get two neighbours
    g = nn_compatible(tied_small.points)
    assert set(g.degrees().tolist()) == {2}


def test_nn_compatible_on_tied_set_matches_no_variant(tied_small):
    g = nn_compatible(tied_small.points)
    assert not g.is_flagged
    assert set(g.degrees().tolist()) <= {2, 3, 4}
    for i in range(4):
        assert g != tied_small.ground_truth(i)


def test_revolve():
    out = revolve([(1.0, 0.0)], 4)
    assert np.allclose(out.points, [(1, 0, 0), (0, 1, 0), (-1, 0, 0), (0, -1, 0)], atol=1e-15)
    g = base_gadget()
    assert revolve(g.points, 7, R=5.0).n == 7 * len(g.points)
    with pytest.raises(GeometryError):
        revolve(g.points, 8, R=0.5)
    with pytest.raises(GeometryError):
        revolve(g.points, 2, R=5.0)
    m = revolve_min_m(1.0, 10.0, 4.7e-4)
    assert revolve_spacing_ok(1.0, m, 10.0, 4.7e-4)
    assert not revolve_spacing_ok(1.0, m // 2, 10.0, 4.7e-4)
    assert 2 * 11.0 * math.sin(math.pi / m) < 0.72 * 4.7e-4


def test_k_star_constant():
    assert K_STAR == 4096
