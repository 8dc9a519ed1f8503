"""Integral solution generators: iterated rounding, exact branch-and-bound,
and minimum-length structures."""

from __future__ import annotations

import heapq
import logging
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .cuts import separate_blossom
from .geom import (
    LineFamily,
    Segment,
    euclidean_length,
    euclidean_length_sq,
    manhattan_length,
    stabbing_number,
)
from .instance import Instance, Method, Problem, Solution
from .lp import (
    OBJ_TOL,
    LinearProgram,
    LpResult,
    LpStatus,
    Row,
    lp_fix_variable,
    lp_solve,
    make_lp,
    make_row,
)
from .models import (
    InfeasibleRelaxationError,
    ModelError,
    RelaxationResult,
    StabModel,
    build_matching_model,
    build_tree_model,
    cut_key,
    cut_row,
    fix_edge,
    lexicographic_refine,
    solve_relaxation,
)

logger = logging.getLogger(__name__)

INT_TOL = 1e-6


class SolveError(RuntimeError):
    pass


@dataclass(frozen=True)
class BnbNode:
    fixed_ones: frozenset[Segment]
    fixed_zeros: frozenset[Segment]
    bound: float
    depth: int


class _UnionFind:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> bool:
        ri, rj = self.find(i), self.find(j)
        if ri == rj:
            return False
        self.parent[ri] = rj
        return True


def _forms_cycle(edges: Sequence[Segment], n: int) -> bool:
    uf = _UnionFind(n)
    return any(not uf.union(e.a, e.b) for e in sorted(edges))


def _rationalized(value: float) -> Fraction:
    return Fraction(value).limit_denominator(10**6)


def _build_model(inst: Instance, problem: Problem, family: LineFamily) -> StabModel:
    if problem is Problem.MATCHING:
        return build_matching_model(inst, family)
    if problem is Problem.SPANNING_TREE:
        return build_tree_model(inst, family)
    raise SolveError(f"no LP model for problem {problem.value}")


def _structure_size(inst: Instance, problem: Problem) -> int:
    return inst.n // 2 if problem is Problem.MATCHING else inst.n - 1


def iterated_rounding(
    inst: Instance,
    problem: Problem,
    family: LineFamily,
    on_iteration: Optional[Callable[[dict], None]] = None,
) -> Solution:
    """Fix a heaviest refined edge to one and re-solve until the structure is
    complete. Ties go to the lexicographically smallest segment; for trees,
    cycle-closing candidates are skipped rather than fixed to zero.

    on_iteration, when given, receives one record per LP round (refined
    weights, chosen edge) for instrumentation.
    """
    model = _build_model(inst, problem, family)
    target = _structure_size(inst, problem)
    first_k_frac: Optional[float] = None
    while len(model.fixed_ones) < target:
        relax = solve_relaxation(model)
        if first_k_frac is None:
            first_k_frac = float(relax.k_frac)
        refined = lexicographic_refine(model, relax)
        choice = _pick_edge(model, refined.x, inst, problem)
        if on_iteration is not None:
            on_iteration(
                {
                    "iteration": len(model.fixed_ones),
                    "k_frac": float(relax.k_frac),
                    "x": dict(refined.x),
                    "fixed_ones": frozenset(model.fixed_ones),
                    "chosen": choice,
                }
            )
        fix_edge(model, choice, 1)
        _fix_dead_edges(model, inst, problem)
    edges = tuple(sorted(model.fixed_ones))
    _assert_feasible(edges, inst, problem)
    k, _ = stabbing_number(edges, inst.points, family)
    assert first_k_frac is not None
    return Solution(
        problem=problem,
        family=family,
        edges=edges,
        k=k,
        lower_bound=_rationalized(first_k_frac),
        method=Method.ROUNDING,
    )


def _fix_dead_edges(model: StabModel, inst: Instance, problem: Problem) -> None:
    """Zero out free edges no integral completion can use.

    For trees these are the edges closing a cycle with the fixed forest (the
    self-loops of the contracted residual problem); leaving them free lets the
    relaxation park weight on them, which breaks the planar-support argument.
    Matching degree rows already force edges at matched vertices to zero, so
    nothing is needed there.
    """
    if problem is not Problem.SPANNING_TREE:
        return
    uf = _UnionFind(inst.n)
    for e in sorted(model.fixed_ones):
        uf.union(e.a, e.b)
    for e in model.edges:
        if e in model.fixed_ones or e in model.fixed_zeros:
            continue
        if uf.find(e.a) == uf.find(e.b):
            fix_edge(model, e, 0)


def _pick_edge(
    model: StabModel, x: dict, inst: Instance, problem: Problem
) -> Segment:
    matched = {v for e in model.fixed_ones for v in e}
    candidates = []
    for e in model.edges:
        if e in model.fixed_ones or e in model.fixed_zeros:
            continue
        if problem is Problem.MATCHING and (e.a in matched or e.b in matched):
            continue
        candidates.append(e)
    if problem is Problem.SPANNING_TREE:
        uf = _UnionFind(inst.n)
        for e in sorted(model.fixed_ones):
            uf.union(e.a, e.b)
        candidates = [e for e in candidates if uf.find(e.a) != uf.find(e.b)]
    if not candidates:
        raise SolveError("no candidate edge left to fix; structure incomplete")
    best_w = max(float(x[e]) for e in candidates)
    tied = [e for e in candidates if float(x[e]) >= best_w - 1e-9]
    return min(tied)


def _assert_feasible(edges: Sequence[Segment], inst: Instance, problem: Problem) -> None:
    if problem is Problem.MATCHING:
        covered = sorted(v for e in edges for v in e)
        if covered != list(range(inst.n)):
            raise SolveError("rounding built a non-perfect matching")
    else:
        if len(edges) != inst.n - 1 or _forms_cycle(edges, inst.n):
            raise SolveError("rounding built a non-spanning structure")
        uf = _UnionFind(inst.n)
        for e in edges:
            uf.union(e.a, e.b)
        if len({uf.find(v) for v in range(inst.n)}) != 1:
            raise SolveError("rounding built a disconnected structure")


def _integral_edges(model: StabModel, x: dict) -> Optional[list[Segment]]:
    chosen = []
    for e, w in x.items():
        v = float(w)
        if abs(v - 1) <= INT_TOL:
            chosen.append(e)
        elif v > INT_TOL:
            return None
    return sorted(chosen)


def branch_and_bound(
    inst: Instance,
    problem: Problem,
    family: LineFamily,
    time_limit: int = 0,
) -> Solution:
    """Best-first search over LP bounds; branch on the most fractional edge.

    time_limit is in milliseconds, 0 means unlimited. On expiry the best
    incumbent is returned with proven=False instead of raising.
    """
    deadline = time.monotonic() + time_limit / 1000 if time_limit else None
    incumbent = iterated_rounding(inst, problem, family)
    best_edges = incumbent.edges
    best_k = incumbent.k

    root_model = _build_model(inst, problem, family)
    cut_pool: set[frozenset[int]] = set()
    try:
        root_relax = solve_relaxation(root_model)
    except InfeasibleRelaxationError as exc:
        raise SolveError(f"root relaxation infeasible: {exc}") from exc
    cut_pool.update(root_model.cut_keys)
    root_bound = float(root_relax.k_frac)
    lower_bound = _rationalized(root_bound)

    counter = 0
    heap: list[tuple[float, int, BnbNode]] = []
    root = BnbNode(frozenset(), frozenset(), root_bound, 0)
    heapq.heappush(heap, (root.bound, counter, root))
    proven = True

    while heap:
        if deadline is not None and time.monotonic() > deadline:
            proven = False
            break
        bound, _, node = heapq.heappop(heap)
        if math.ceil(bound - OBJ_TOL) >= best_k:
            break  # best-first: every remaining node is at least as bad
        model = _build_model(inst, problem, family)
        rows = []
        for members in sorted(cut_pool, key=sorted):
            rows.append(cut_row(model, members))
            model.cut_keys.add(members)
        if rows:
            model.lp = model.lp.with_rows(rows)
        for e in sorted(node.fixed_ones):
            fix_edge(model, e, 1)
        for e in sorted(node.fixed_zeros):
            fix_edge(model, e, 0)
        _fix_dead_edges(model, inst, problem)
        try:
            relax = solve_relaxation(model)
        except InfeasibleRelaxationError:
            continue
        cut_pool.update(model.cut_keys)
        k_frac = float(relax.k_frac)
        node_bound = math.ceil(k_frac - OBJ_TOL)
        if node_bound >= best_k:
            continue
        integral = _integral_edges(model, relax.x)
        if integral is not None:
            _assert_feasible(integral, inst, problem)
            k_int, _ = stabbing_number(integral, inst.points, family)
            if k_int < best_k:
                best_k = k_int
                best_edges = tuple(integral)
            continue
        branch_edge = _most_fractional(model, relax.x)
        for value in (1, 0):
            ones = set(node.fixed_ones)
            zeros = set(node.fixed_zeros)
            (ones if value else zeros).add(branch_edge)
            if value and problem is Problem.SPANNING_TREE and _forms_cycle(ones, inst.n):
                continue
            if value and problem is Problem.MATCHING:
                touched = [v for e in ones for v in e]
                if len(touched) != len(set(touched)):
                    continue
            counter += 1
            child = BnbNode(frozenset(ones), frozenset(zeros), k_frac, node.depth + 1)
            heapq.heappush(heap, (child.bound, counter, child))

    return Solution(
        problem=problem,
        family=family,
        edges=tuple(sorted(best_edges)),
        k=best_k,
        lower_bound=lower_bound,
        method=Method.EXACT,
        proven=proven,
    )


def _most_fractional(model: StabModel, x: dict) -> Segment:
    best: Optional[Segment] = None
    best_score = float("inf")
    for e in model.edges:
        if e in model.fixed_ones or e in model.fixed_zeros:
            continue
        w = float(x[e])
        if w <= INT_TOL or abs(w - 1) <= INT_TOL:
            continue
        score = abs(w - 0.5)
        if score < best_score - 1e-12 or (
            abs(score - best_score) <= 1e-12 and (best is None or e < best)
        ):
            best = e
            best_score = score
    if best is None:
        raise SolveError("no fractional edge to branch on")
    return best


# ---------------------------------------------------------------------------
# minimum-length structures


def _metric_length(seg: Segment, inst: Instance, metric: str):
    if metric == "euclidean":
        return euclidean_length(seg, inst.points)
    if metric == "manhattan":
        return manhattan_length(seg, inst.points)
    raise SolveError(f"unknown metric {metric!r}")


def _metric_family(metric: str) -> LineFamily:
    # mirrors the average-stabbing equivalence: axis lines pair with the
    # Manhattan metric, general lines with the Euclidean one
    return LineFamily.AXIS_PARALLEL if metric == "manhattan" else LineFamily.GENERAL


def min_length_matching(inst: Instance, metric: str = "euclidean") -> Solution:
    """Minimum-total-length perfect matching via the matching polytope LP.

    Degree equalities plus lazily separated odd-set cuts make every vertex of
    the feasible region integral; integrality is asserted and re-checked with
    the exact rational solver before giving up. Ties between optimal
    matchings are broken toward the lexicographically smallest edge list by
    greedy fixing under an optimal-length cap.
    """
    if inst.n % 2 != 0:
        raise SolveError(f"matching requires even n, got {inst.n}")
    edges = tuple(inst.all_edges())
    index = {e: i for i, e in enumerate(edges)}
    lengths = [_metric_length(e, inst, metric) for e in edges]
    lp = _matching_polytope_lp(inst, edges, lengths)

    seen_cuts: set[frozenset[int]] = set()
    lp, result, x = _blossom_loop(inst, edges, lp, exact=False, seen=seen_cuts)
    if _integral(x) is None:
        logger.info("fractional matching optimum; re-checking with exact solver")
        lp, result, x = _blossom_loop(inst, edges, lp, exact=True, seen=seen_cuts)
        if _integral(x) is None:
            raise SolveError(
                "matching LP stayed fractional after exact re-check; "
                "blossom separation is incomplete"
            )
    optimum = float(result.objective_value)

    # lexicographic selection among optimal matchings
    budget = optimum + OBJ_TOL * max(1.0, abs(optimum))
    cap = make_row(dict(enumerate(lengths)), "<=", budget)
    work = lp.with_rows([cap])
    chosen: list[Segment] = []
    matched: set[int] = set()
    warm = result.basis
    for e in edges:
        if len(chosen) == inst.n // 2:
            break
        if e.a in matched or e.b in matched:
            continue
        trial = lp_fix_variable(work, index[e], 1)
        trial, t_result, t_x = _blossom_loop(
            inst,
            edges,
            trial,
            exact=False,
            warm_basis=warm,
            allow_infeasible=True,
            seen=set(seen_cuts),
        )
        if t_result is not None and t_result.status is LpStatus.OPTIMAL:
            work = trial
            warm = t_result.basis
            chosen.append(e)
            matched.update(e)
        else:
            work = lp_fix_variable(work, index[e], 0)
    if len(chosen) != inst.n // 2:
        raise SolveError("lexicographic fixing failed to complete a matching")
    out = tuple(sorted(chosen))
    family = _metric_family(metric)
    k, _ = stabbing_number(out, inst.points, family)
    return Solution(
        problem=Problem.MATCHING,
        family=family,
        edges=out,
        k=k,
        lower_bound=None,
        method=Method.MIN_LENGTH,
    )


def _matching_polytope_lp(inst, edges, lengths) -> LinearProgram:
    index = {e: i for i, e in enumerate(edges)}
    rows = []
    for v in range(inst.n):
        rows.append(make_row({index[e]: 1 for e in edges if v in e}, "=", 1))
    return make_lp(
        len(edges), dict(enumerate(lengths)), rows, [(0, 1)] * len(edges)
    )


def _blossom_loop(
    inst: Instance,
    edges: tuple[Segment, ...],
    lp: LinearProgram,
    *,
    exact: bool,
    warm_basis: Optional[Sequence[int]] = None,
    allow_infeasible: bool = False,
    seen: Optional[set[frozenset[int]]] = None,
):
    """Solve/separate until no violated odd-set cut; standalone version for
    plain matching-polytope programs (no k variable)."""
    if seen is None:
        seen = set()
    warm = list(warm_basis) if warm_basis else None
    while True:
        result = lp_solve(lp, warm_basis=warm, exact=exact)
        if result.status is LpStatus.INFEASIBLE:
            if allow_infeasible:
                return lp, None, {}
            raise SolveError("matching polytope LP infeasible")
        if result.status is not LpStatus.OPTIMAL:
            raise SolveError(f"matching LP came back {result.status.value}")
        x = {e: result.primal[i] for i, e in enumerate(edges)}
        kwargs = dict(support_eps=0, violation_eps=0) if exact else {}
        cuts = []
        for c in separate_blossom(x, inst.n, **kwargs):
            key = cut_key(c.members, inst.n)
            if key not in seen:
                seen.add(key)
                cuts.append(c)
        if not cuts:
            return lp, result, x
        rows = []
        for c in cuts:
            coeffs = {
                i: 1
                for i, e in enumerate(edges)
                if (e.a in c.members) != (e.b in c.members)
            }
            rows.append(make_row(coeffs, ">=", 1))
        lp = lp.with_rows(rows)
        warm = result.basis


def _integral(x: dict) -> Optional[list[Segment]]:
    chosen = []
    for e, w in x.items():
        v = float(w)
        if abs(v - 1) <= INT_TOL:
            chosen.append(e)
        elif v > INT_TOL:
            return None
    return sorted(chosen)


def min_length_tree(inst: Instance, metric: str = "euclidean") -> Solution:
    """Minimum spanning tree under the metric; Kruskal with lexicographic
    tie-breaking (squared lengths keep Euclidean comparisons exact)."""
    if inst.n < 2:
        raise SolveError("spanning tree needs n >= 2")
    if metric == "euclidean":
        keyed = sorted(
            (euclidean_length_sq(e, inst.points), e) for e in inst.all_edges()
        )
    elif metric == "manhattan":
        keyed = sorted(
            (manhattan_length(e, inst.points), e) for e in inst.all_edges()
        )
    else:
        raise SolveError(f"unknown metric {metric!r}")
    uf = _UnionFind(inst.n)
    chosen = []
    for _, e in keyed:
        if uf.union(e.a, e.b):
            chosen.append(e)
            if len(chosen) == inst.n - 1:
                break
    out = tuple(sorted(chosen))
    family = _metric_family(metric)
    k, _ = stabbing_number(out, inst.points, family)
    return Solution(
        problem=Problem.SPANNING_TREE,
        family=family,
        edges=out,
        k=k,
        lower_bound=None,
        method=Method.MIN_LENGTH,
    )
