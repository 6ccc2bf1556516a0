"""Command-line front end.

    curverecon reconstruct|generate|validate|counterexample|bench [options]

Exit codes: 0 ok, 1 error, 2 flagged output (reconstruction raised the
invalid-sample flag, or a validated sample misses the requested epsilon).
"""
from __future__ import annotations

import argparse
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import bench, gadget, io
from .curves import make_curve
from .geom import CompatParams, GeometryError
from .recon import ALGORITHMS, reconstruct
from .sampling import default_density, epsilon_star, ground_truth_graph, greedy_sample, rho_star, tag_sample
from .svg import emit_svg

OK, ERROR, FLAGGED = 0, 1, 2
FAMILIES = ("circle", "ellipse", "concentric", "hook")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    inputs: list = field(default_factory=list)
    out: Path | None = None
    svg: Path | None = None
    epsilon: float = 0.66
    density: float | None = None
    seed: int = 0
    algorithm: str = "nn-compatible"
    family: str | None = None
    periods: int = gadget.K_STAR
    verify: bool = True
    sizes: list = field(default_factory=list)
    reps: int = 5
    canvas: int = 800
    stroke: float = 1.0

    def validate(self):
        if not (0.0 < self.epsilon < math.sqrt(2.0)):
            raise UsageError(f"--epsilon must lie in (0, sqrt 2), got {self.epsilon}")
        if self.density is not None and not self.density > 0:
            raise UsageError(f"--density must be positive, got {self.density}")
        for p in self.inputs:
            if not p.is_file():
                raise UsageError(f"input file not found: {p}")
        for p in (self.out, self.svg):
            if p is not None and p.exists() and p.is_dir() and self.subcommand not in ("counterexample",):
                raise UsageError(f"output path is a directory: {p}")


def _need_inputs(cfg: RunConfig, n: int, what: str):
    if len(cfg.inputs) != n:
        raise UsageError(f"{cfg.subcommand} needs {what} via --in (got {len(cfg.inputs)} path(s))")


def _need_out(cfg: RunConfig):
    if cfg.out is None:
        raise UsageError(f"{cfg.subcommand} needs --out")


def _svg_opts(cfg: RunConfig) -> dict:
    return {"size": cfg.canvas, "stroke": cfg.stroke}


# ---------------------------------------------------------------- commands

def cmd_reconstruct(cfg: RunConfig) -> int:
    _need_inputs(cfg, 1, "a point CSV")
    _need_out(cfg)
    s = io.read_points(cfg.inputs[0])
    g = reconstruct(s, cfg.algorithm, CompatParams(cfg.epsilon))
    io.write_edges(cfg.out, g)
    if cfg.svg is not None:
        emit_svg(s.points, g.edges, None, cfg.svg, **_svg_opts(cfg))
    print(f"vertices {g.n} edges {len(g.edges)}")
    if g.is_flagged:
        print(f"invalid sample: no compatible neighbour for {len(g.flagged)} vertices (first {g.flagged[0]})")
        return FLAGGED
    return OK


def _curve_from_args(cfg: RunConfig):
    if cfg.family is not None:
        return make_curve({"type": cfg.family})
    _need_inputs(cfg, 1, "a curve JSON")
    return io.read_curve(cfg.inputs[0])


def cmd_generate(cfg: RunConfig) -> int:
    _need_out(cfg)
    curve = _curve_from_args(cfg)
    s = greedy_sample(curve, cfg.epsilon, seed=cfg.seed, density=cfg.density)
    io.write_points(cfg.out, s)
    io.write_curve(cfg.out.with_suffix(".json"), curve)
    if cfg.svg is not None:
        emit_svg(s.points, ground_truth_graph(curve, s).edges, curve, cfg.svg, **_svg_opts(cfg))
    print(f"points {s.n} -> {cfg.out}")
    return OK


def cmd_validate(cfg: RunConfig) -> int:
    _need_inputs(cfg, 2, "a point CSV and a curve JSON")
    s = io.read_points(cfg.inputs[0])
    curve = io.read_curve(cfg.inputs[1])
    density = cfg.density if cfg.density is not None else default_density(curve)
    s = tag_sample(curve, s)
    eps = epsilon_star(curve, s, density)
    report = {"epsilon": cfg.epsilon, "verdict": eps.verdict(cfg.epsilon), "eps_star": eps.eps_star,
              "eps_star_corrected": eps.eps_star_corrected, "witness": eps.witness.tolist(), "density": density}
    try:
        rho = rho_star(curve, s, density)
        report["rho_star"] = rho.eps_star
        report["rho_witness"] = rho.witness.tolist()
    except GeometryError as exc:
        report["rho_star"] = None
        report["rho_error"] = str(exc)
    if cfg.out is not None:
        io.write_json(cfg.out, report)
    print(f"eps_star {eps.eps_star:.6f} ({'<' if report['verdict'] else '>='} {cfg.epsilon})")
    return OK if report["verdict"] else FLAGGED


def cmd_counterexample(cfg: RunConfig) -> int:
    _need_out(cfg)
    t0 = time.perf_counter()
    g = gadget.tied_annuli_gadget(cfg.periods)
    graphs = [g.ground_truth(i) for i in range(4)]
    out = cfg.out
    out.mkdir(parents=True, exist_ok=True)
    io.write_points(out / "points.csv", g.sample)
    for i, (curve, graph) in enumerate(zip(g.variants, graphs), start=1):
        io.write_curve(out / f"curve_C{i}.json", curve)
        io.write_edges(out / f"edges_C{i}.txt", graph)
    distinct = all(graphs[i].edges != graphs[j].edges for i in range(4) for j in range(i + 1, 4))
    report = {"points": len(g.points), "periods": cfg.periods, "component_counts": g.components,
              "pairwise_distinct": distinct, "construction": g.log_json()}
    if cfg.verify:
        v = gadget.verify_gadget(g, density=cfg.density or 1e-3)
        report["verification"] = v.to_json()
    io.write_json(out / "report.json", report)
    if cfg.svg is not None:
        cfg.svg.mkdir(parents=True, exist_ok=True)
        for i, graph in enumerate(graphs, start=1):
            emit_svg(g.points, graph.edges, None, cfg.svg / f"C{i}.svg", **_svg_opts(cfg))
    ok = distinct and (not cfg.verify or report["verification"]["ok"])
    print(f"points {len(g.points)} components {g.components} distinct {distinct}"
          + (f" min margin {report['verification']['min_margin']:.3e}" if cfg.verify else "")
          + f" ({time.perf_counter() - t0:.1f} s)")
    return OK if ok else FLAGGED


def cmd_bench(cfg: RunConfig) -> int:
    sizes = cfg.sizes or [2500, 5000, 10000, 20000]
    algos = [cfg.algorithm] if cfg.algorithm else ["nn-compatible", "compatible-crust"]
    rows = bench.run_bench(sizes, algos, reps=cfg.reps, seed=cfg.seed)
    text = bench.format_csv(rows)
    if cfg.out is not None:
        io.atomic_write(cfg.out, text)
    sys.stdout.write(text)
    return OK


COMMANDS = {
    "reconstruct": cmd_reconstruct,
    "generate": cmd_generate,
    "validate": cmd_validate,
    "counterexample": cmd_counterexample,
    "bench": cmd_bench,
}


# ---------------------------------------------------------------- parsing

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="curverecon", description="Curve reconstruction from point samples.")
    p.add_argument("subcommand", choices=sorted(COMMANDS))
    p.add_argument("--in", dest="inputs", action="append", default=[], type=Path, metavar="PATH",
                   help="input file; repeat for commands taking several")
    p.add_argument("--out", type=Path, metavar="PATH")
    p.add_argument("--svg", type=Path, metavar="PATH")
    p.add_argument("--algorithm", choices=sorted(ALGORITHMS), default=None)
    p.add_argument("--epsilon", type=float, default=0.66)
    p.add_argument("--density", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--family", choices=FAMILIES, help="generate: use a built-in curve instead of --in")
    p.add_argument("--periods", type=int, default=gadget.K_STAR, help="counterexample: periods per ring")
    p.add_argument("--no-verify", dest="verify", action="store_false", help="counterexample: skip verification")
    p.add_argument("--sizes", type=lambda s: [int(v) for v in s.split(",")], default=[],
                   help="bench: comma-separated sample sizes")
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--canvas", type=int, default=800, help="SVG canvas size in pixels")
    p.add_argument("--stroke", type=float, default=1.0, help="SVG stroke width")
    return p


def config_from_args(argv=None) -> RunConfig:
    a = build_parser().parse_args(argv)
    algo = a.algorithm if a.algorithm is not None else ("" if a.subcommand == "bench" else "nn-compatible")
    cfg = RunConfig(a.subcommand, a.inputs, a.out, a.svg, a.epsilon, a.density, a.seed, algo, a.family,
                    a.periods, a.verify, a.sizes, a.reps, a.canvas, a.stroke)
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
    except SystemExit as exc:
        return ERROR if exc.code else OK
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR
    try:
        return COMMANDS[cfg.subcommand](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR
    except (GeometryError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
