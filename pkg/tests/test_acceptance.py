"""End-to-end acceptance checks, one test per criterion."""
import itertools
import math
import time

import numpy as np
import pytest

from curverecon import circle, compatible_crust, concentric, epsilon_star, ground_truth_graph, nn_compatible
from curverecon.bench import growth, run_bench
from curverecon.gadget import (EPS, K_STAR, REVOLVE_M, REVOLVE_R, base_gadget, revolve, revolve_spacing_ok,
                               tied_annuli_gadget, verify_gadget)
from curverecon.geom import CompatParams, compat_margin_batch, compat_threshold
from curverecon.sampling import hook_midpoint_ratio, hook_reach_ratio, rho_star, tag_sample
from helpers import FAMILIES, ball_oracle, family, lemma_violations, valid_sample


def report(num, ok, detail):
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'} {detail}")


def regular(n, r=1.0):
    th = 2 * math.pi * np.arange(n) / n
    return np.stack([r * np.cos(th), r * np.sin(th)], 1)


def bisect(f, lo, hi, iters=50):
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if f(mid) == flo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_criterion_1_reconstruction():
    t0 = time.perf_counter()
    trials, wrong, invalid = 0, [], 0
    for name in FAMILIES:
        curve = family(name)
        for seed in range(100):
            s, eps = valid_sample(name, seed)
            if eps > 0.66:
                invalid += 1
                continue
            truth = ground_truth_graph(curve, s)
            trials += 1
            if nn_compatible(s) != truth or compatible_crust(s) != truth:
                wrong.append((name, seed))
    dt = time.perf_counter() - t0
    ok = not wrong and not invalid and trials == 400 and dt < 60
    report(1, ok, f"{trials} trials, {len(wrong)} mismatches, {invalid} invalid samples, {dt:.1f} s")
    assert trials == 400 and not invalid
    assert not wrong
    assert dt < 60


def test_criterion_2_minimal_circle():
    c = circle()
    five = epsilon_star(c, regular(5), 1e-3).eps_star
    four = epsilon_star(c, regular(4), 1e-3)
    g = nn_compatible(regular(5))
    cyc = [(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)]
    ok = (abs(five - 0.61803) <= 1e-4 and g.sorted_edges() == cyc and compatible_crust(regular(5)) == g
          and abs(four.eps_star - 0.76537) <= 1e-4 and not four.verdict(0.66))
    report(2, ok, f"eps_star(5) {five:.6f}, eps_star(4) {four.eps_star:.6f}")
    assert five == pytest.approx(0.61803, abs=1e-4)
    assert g.sorted_edges() == cyc and compatible_crust(regular(5)) == g
    assert four.eps_star == pytest.approx(0.76537, abs=1e-4)
    assert not four.verdict(0.66)


def test_criterion_3_compatibility_predicate():
    mismatches, compared = 0, 0
    for dim in (2, 3, 5):
        rng = np.random.default_rng(300 + dim)
        for _ in range(10):
            a, b, c = (rng.uniform(-1, 1, (10_000, dim)) for _ in range(3))
            m = compat_margin_batch(a, b, c)
            keep = np.abs(np.degrees(m)) > 1e-6
            oracle = ball_oracle(a, b, c, 0.66, n_witness=256, rng=rng)
            mismatches += int(np.sum((m > 0)[keep] != oracle[keep]))
            compared += int(keep.sum())
    flip = math.degrees(compat_threshold(1.0, 1.0, CompatParams(0.66)))
    target = 2 * math.degrees(math.acos(0.62304))
    ok = mismatches == 0 and compared > 299_000 and abs(flip - target) <= 0.01 and flip > 102.9
    report(3, ok, f"{compared} triples compared, {mismatches} mismatches, flip angle {flip:.4f} deg")
    assert mismatches == 0 and compared > 299_000
    assert flip == pytest.approx(target, abs=0.01)
    assert flip > 102.9


def test_criterion_4_lemma_suite():
    totals = {}
    samples = 0
    for name in FAMILIES:
        for seed in range(30):
            s, eps = valid_sample(name, seed)
            assert eps <= 0.66
            for k, v in lemma_violations(family(name), s).items():
                totals[k] = totals.get(k, 0) + v
            samples += 1
    ok = not any(totals.values())
    report(4, ok, f"{samples} samples, violations {totals}")
    assert not any(totals.values()), totals


def test_criterion_5_counterexample():
    t0 = time.perf_counter()
    g = tied_annuli_gadget(K_STAR)
    truths = [g.ground_truth(i) for i in range(4)]
    distinct = all(truths[i] != truths[j] for i, j in itertools.combinations(range(4), 2))
    rep = verify_gadget(g, EPS, density=1e-3)
    dt = time.perf_counter() - t0
    counts = tuple(g.components)
    ok = counts == (1, 1, 2, 2) and distinct and rep.ok and dt < 120
    report(5, ok, f"components {counts}, pairwise distinct {distinct}, min margin {rep.min_margin:.3e}, "
                  f"eps_star {max(rep.eps_star):.6f}, {dt:.1f} s")
    assert distinct
    assert rep.min_margin > 0 and max(rep.eps_star) <= EPS
    assert dt < 120
    assert counts == (1, 1, 2, 2)


def test_criterion_6_hook_and_reach():
    x_eps = bisect(lambda x: hook_midpoint_ratio(x) < 0.66, 0.5, 0.95)
    x_rho = bisect(lambda x: hook_reach_ratio(x) > 0.9, 0.5, 0.95)
    c = concentric((0, 0), (100.0, 102.0))
    s = tag_sample(c, np.vstack([regular(2000, 100.0), regular(2040, 102.0)]))
    e = epsilon_star(c, s, 0.05).eps_star
    r = rho_star(c, s, 0.05).eps_star
    ok = abs(x_eps - 0.7952) <= 1e-4 and abs(x_rho - 0.6429) <= 1e-4 and abs(r - e) <= 1e-6
    report(6, ok, f"x_eps {x_eps:.6f}, x_rho {x_rho:.6f}, |rho_star - eps_star| {abs(r - e):.2e}")
    assert x_eps == pytest.approx(0.7952, abs=1e-4)
    assert x_rho == pytest.approx(0.6429, abs=1e-4)
    assert r == pytest.approx(e, abs=1e-6)


def test_criterion_7_scaling():
    crust = run_bench([25_000, 100_000], ["compatible-crust"], reps=5)
    nn = run_bench([5_000, 20_000], ["nn-compatible"], reps=5)
    g_crust = growth(crust, "compatible-crust", 25_000, 100_000)
    g_nn = growth(nn, "nn-compatible", 5_000, 20_000)
    ok = g_crust <= 5.5 and 8 <= g_nn <= 24
    report(7, ok, f"compatible_crust x{g_crust:.2f} (25k to 100k), nn_compatible x{g_nn:.2f} (5k to 20k)")
    assert g_crust <= 5.5
    assert 8 <= g_nn <= 24


def test_criterion_8_revolution():
    g = base_gadget()
    rep = verify_gadget(g)
    out = revolve(g.points, REVOLVE_M, REVOLVE_R)
    x_max = float(g.points[:, 0].max())
    spacing = 2 * (x_max + REVOLVE_R) * math.sin(math.pi / REVOLVE_M)
    ok = (out.n == REVOLVE_M * len(g.points) and rep.ok
          and revolve_spacing_ok(x_max, REVOLVE_M, REVOLVE_R, rep.min_margin))
    report(8, ok, f"m {REVOLVE_M}, R {REVOLVE_R}, {out.n} points, spacing {spacing:.3e} "
                  f"< {EPS * rep.min_margin:.3e}")
    assert out.n == REVOLVE_M * len(g.points)
    assert rep.ok
    assert revolve_spacing_ok(x_max, REVOLVE_M, REVOLVE_R, rep.min_margin)
    assert spacing < EPS * rep.min_margin
