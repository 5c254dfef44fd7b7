"""Layered baseline heuristics.

Both reduce the multi-grade problem to single-grade Steiner tree calls
through a pluggable subroutine. The top-down pass solves one tree per
grade from the highest down, contracting as it goes, and is within a
factor of (number of grades) of optimal when the subroutine is exact.
The bottom-up pass buys one tree at the top grade and then demotes
vertices to the highest requirement below them; it carries no guarantee
and exists as a comparison baseline.
"""

from __future__ import annotations

from typing import Callable, Iterable

from .costs import Cost
from .greedy import solve_greedy
from .instance import (
    Instance,
    InternalInvariantError,
    SolutionReport,
    VgsstError,
    assert_valid,
    check_feasible,
    extract_tree,
    normalize,
    solution_cost,
    spanning_tree_by_levels,
)

#: Contract for the single-grade subroutine: takes a one-grade instance
#: (every terminal requiring grade 1) and returns a vertex set that
#: induces a connected subgraph containing all its terminals.
VstSubroutine = Callable[[Instance], frozenset[int]]


class VstContractError(VgsstError):
    """The plugged single-grade subroutine returned an unusable vertex set."""


def single_grade_view(
    instance: Instance,
    grade: int,
    terminals: Iterable[int],
    free: Iterable[int] = (),
) -> Instance:
    """One-grade instance over the same graph using one cost column.

    Vertices in ``free`` (typically an already-bought, contracted region)
    get a zero cost so the subroutine can roam them at no charge.
    """
    free_set = set(free)
    column = [
        [Cost.zero()] if v in free_set else [instance.costs[v][grade - 1]]
        for v in range(instance.num_vertices)
    ]
    return Instance.build(
        instance.num_vertices,
        instance.edges,
        1,
        {t: 1 for t in terminals},
        column,
    )


def _check_vst_result(view: Instance, result: frozenset[int]) -> None:
    missing = set(view.terminals) - set(result)
    if missing:
        raise VstContractError(f"subroutine result misses terminals {sorted(missing)}")
    chosen = sorted(result)
    if not chosen:
        raise VstContractError("subroutine returned an empty set")
    indicator = [1 if v in result else 0 for v in range(view.num_vertices)]
    edges = spanning_tree_by_levels(view, indicator, allowed=result)
    if len(edges) != len(chosen) - 1:
        raise VstContractError("subroutine result does not induce a connected subgraph")


def greedy_as_vst(view: Instance) -> frozenset[int]:
    """Default polynomial subroutine: the merge solver run at one grade.

    Handles terminals with positive cost by normalizing first and mapping
    the zero-cost twins back out of the answer.
    """
    if view.grades != 1:
        raise VgsstError("subroutine views must have exactly one grade")
    norm = normalize(view)
    report = solve_greedy(norm.instance)
    spanned = {
        v
        for v in range(view.num_vertices)
        if v < len(report.assignment) and report.assignment[v] >= 1
    }
    spanned.update(view.terminals)
    return frozenset(spanned)


def solve_topdown(instance: Instance, vst: VstSubroutine) -> SolutionReport:
    """Grade-by-grade construction from the top down.

    Each round spans the terminals demanding exactly that grade plus the
    region built so far (represented by a zero-cost member vertex rather
    than an explicit contraction, keeping vertex ids stable), then assigns
    the round's grade to newly bought vertices. Grades never decrease.
    """
    assert_valid(instance)
    n = instance.num_vertices
    y = [0] * n
    spanned: set[int] = set()
    per_grade = [Cost.zero()] * instance.grades

    for grade in range(instance.grades, 0, -1):
        fresh = [t for t in instance.terminals if instance.required[t] == grade]
        if not fresh:
            continue
        terminals = set(fresh)
        if spanned:
            terminals.add(min(spanned))
        view = single_grade_view(instance, grade, terminals, free=spanned)
        result = frozenset(vst(view))
        _check_vst_result(view, result)
        incurred = Cost.zero()
        for v in sorted(result - spanned):
            incurred = incurred + instance.costs[v][grade - 1]
            y[v] = grade
        per_grade[grade - 1] = incurred
        spanned |= result

    assignment = tuple(y)
    ok, witness = check_feasible(instance, assignment)
    if not ok:
        raise InternalInvariantError(f"top-down result infeasible: {witness}")
    return SolutionReport(
        assignment=assignment,
        tree_edges=extract_tree(instance, assignment),
        total_cost=solution_cost(instance, assignment),
        grade_costs=tuple(per_grade),
    )


def solve_bottomup(instance: Instance, vst: VstSubroutine) -> SolutionReport:
    """One top-grade tree over all terminals, then demote along subtrees.

    The tree is rooted at the smallest-id terminal demanding the top
    grade; every vertex then drops to the highest requirement found in
    its subtree (terminal-free branches are pruned). Vertices that sit
    between high-demand terminals cannot demote, which is exactly where
    this heuristic loses to the merge solver.
    """
    assert_valid(instance)
    view = single_grade_view(instance, instance.grades, instance.terminals)
    result = frozenset(vst(view))
    _check_vst_result(view, result)

    indicator = [1 if v in result else 0 for v in range(instance.num_vertices)]
    edges = spanning_tree_by_levels(instance, indicator, allowed=result)
    root = min(v for v in instance.terminals if instance.required[v] == instance.grades)

    children: dict[int, list[int]] = {v: [] for v in result}
    parent = {root: -1}
    order = [root]
    adj: dict[int, list[int]] = {v: [] for v in result}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    for v in order:
        for u in sorted(adj[v]):
            if u not in parent:
                parent[u] = v
                children[v].append(u)
                order.append(u)

    # Post-order pass: highest requirement in each subtree; 0 means prune.
    demand = {v: instance.required.get(v, 0) for v in result}
    for v in reversed(order):
        for u in children[v]:
            demand[v] = max(demand[v], demand[u])

    y = [0] * instance.num_vertices
    for v in order:
        if demand[v] > 0:
            y[v] = demand[v]
    assignment = tuple(y)
    ok, witness = check_feasible(instance, assignment)
    if not ok:
        raise InternalInvariantError(f"bottom-up result infeasible: {witness}")
    kept = {v for v in order if demand[v] > 0}
    tree = tuple(sorted((u, v) for u, v in edges if u in kept and v in kept))
    return SolutionReport(
        assignment=assignment,
        tree_edges=tree,
        total_cost=solution_cost(instance, assignment),
    )
