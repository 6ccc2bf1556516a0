"""Curve reconstruction from point samples, with sampling validators and
generators for point sets that admit several valid reconstructions."""
from ._backend import NAME as BACKEND
from .curves import (Arc, Component, CurveModel, Ellipse, Line, arc_chain, circle, concentric, ellipse, hook,
                     lfs_numeric, make_curve)
from .delaunay import Triangulation2D, triangulate
from .gadget import (Gadget, VerificationReport, annulus, base_gadget, extend_gadget, k_min_search, revolve,
                     revolve_spacing_ok, strip, tied_annuli, tied_annuli_gadget, verify_gadget)
from .geom import (CompatParams, GeometryError, angle, angle_deg, compat_margin, distance, is_compatible,
                   is_compatible_oracle)
from .predicates import incircle, orient2d
from .recon import ReconGraph, compatible_crust, graph_diff, graph_equal, nn_compatible, nn_crust_baseline, reconstruct
from .samples import SampleSet
from .sampling import SamplingReport, epsilon_star, greedy_sample, ground_truth_graph, rho_star, tag_sample
from .svg import emit_svg, render_svg

__all__ = [
    "BACKEND", "Arc", "Component", "CurveModel", "Ellipse", "Line", "arc_chain", "circle", "concentric", "ellipse",
    "hook", "lfs_numeric", "make_curve", "Triangulation2D", "triangulate", "Gadget", "VerificationReport",
    "annulus", "base_gadget", "extend_gadget", "k_min_search", "revolve", "revolve_spacing_ok", "strip",
    "tied_annuli", "tied_annuli_gadget", "verify_gadget", "CompatParams", "GeometryError", "angle", "angle_deg",
    "compat_margin", "distance", "is_compatible", "is_compatible_oracle", "incircle", "orient2d", "ReconGraph",
    "compatible_crust", "graph_diff", "graph_equal", "nn_compatible", "nn_crust_baseline", "reconstruct",
    "SampleSet", "SamplingReport", "epsilon_star", "greedy_sample", "ground_truth_graph", "rho_star", "tag_sample",
    "emit_svg", "render_svg",
]
