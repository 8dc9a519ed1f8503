"""Minimum stabbing number structures: cut-based LP relaxations with blossom
and connectivity separation, iterated rounding, exact branch-and-bound, and
brute-force oracles for verification."""

from .geom import (
    LineFamily,
    Point,
    Segment,
    StabLine,
    average_stabbing,
    crossing_number,
    is_crossing_pair,
    orient,
    representative_lines,
    stabbing_number,
    stabs,
)
from .instance import (
    Instance,
    Method,
    Problem,
    Solution,
    gen_grid,
    gen_random,
    parse_instance,
    parse_solution,
    serialize_instance,
    solution_to_json,
    verify_solution,
)
from .models import (
    RelaxationResult,
    StabModel,
    build_matching_model,
    build_tree_model,
    certify_relaxation,
    lexicographic_refine,
    solve_relaxation,
)
from .oracle import EnumBudget, Objective, brute_optimum
from .render import render_svg
from .solve import branch_and_bound, iterated_rounding, min_length_matching, min_length_tree

__version__ = "0.1.0"

__all__ = [
    "LineFamily",
    "Point",
    "Segment",
    "StabLine",
    "Instance",
    "Method",
    "Problem",
    "Solution",
    "EnumBudget",
    "Objective",
    "RelaxationResult",
    "StabModel",
    "average_stabbing",
    "branch_and_bound",
    "brute_optimum",
    "build_matching_model",
    "build_tree_model",
    "certify_relaxation",
    "crossing_number",
    "gen_grid",
    "gen_random",
    "is_crossing_pair",
    "iterated_rounding",
    "lexicographic_refine",
    "min_length_matching",
    "min_length_tree",
    "orient",
    "parse_instance",
    "parse_solution",
    "render_svg",
    "representative_lines",
    "serialize_instance",
    "solution_to_json",
    "solve_relaxation",
    "stabbing_number",
    "stabs",
    "verify_solution",
]
