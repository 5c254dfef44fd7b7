"""Greedy merge solver.

Maintains a collection of rooted trees, one per terminal to begin with,
plus per-vertex incremental upgrade weights. Each round picks the merge
with the best exact cost-to-connectivity ratio

    (dist(root, center) + weight(center) + sum of center-to-root dists)
    -----------------------------------------------------------------
                        number of trees merged

and joins a root tree to a subset of others through a chosen center
vertex, upgrading grades along the connecting paths. Terminates when a
single tree remains; the cost is within 2*ln(#terminals) of optimal.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction

from .costs import COST_SCALE, Cost
from .instance import (
    GradeAssignment,
    InfeasibleAssignmentError,
    InputError,
    Instance,
    InternalInvariantError,
    IterationRecord,
    SolutionReport,
    assert_valid,
    extract_tree,
    solution_cost,
)


class StaleCandidateError(InternalInvariantError):
    """A merge candidate was applied after the forest had already changed."""


@dataclass(frozen=True)
class GradedDistanceRow:
    """Single-source shortest paths under one grade's upgrade weights.

    Distances exclude the weights of both endpoints; ``preds`` allows path
    reconstruction. Entries are exact micro counts.
    """

    source: int
    grade: int
    interior_micros: tuple[int, ...]
    preds: tuple[int, ...]

    def distance_to(self, v: int) -> Cost:
        return Cost.from_micros(self.interior_micros[v])

    def path_to(self, v: int) -> tuple[int, ...]:
        """Vertices from source to v, inclusive."""
        path = [v]
        while path[-1] != self.source:
            prev = self.preds[path[-1]]
            if prev < 0:
                raise InternalInvariantError(f"no path recorded to {v}")
            path.append(prev)
        return tuple(reversed(path))


@dataclass(frozen=True)
class MergeCandidate:
    """One legal merge with its exact ratio and reconstructed paths."""

    root: int
    center: int
    grade: int
    subset_roots: tuple[int, ...]
    gamma: Fraction
    numerator_micros: int
    root_path: tuple[int, ...]
    leg_paths: tuple[tuple[int, ...], ...]
    forest_version: int

    @property
    def merged_count(self) -> int:
        return 1 + len(self.subset_roots)

    def sort_key(self):
        # Deterministic tie-break: grade, then center id, then root id,
        # then larger subsets first.
        return (self.gamma, self.grade, self.center, self.root, -len(self.subset_roots))


class GrtForest:
    """Mutable working state of the greedy solver.

    Trees are keyed by their root vertex; member sets may overlap. ``y``
    holds current grades, ``w[v][i-1]`` the exact incremental cost of
    lifting v to grade i from its current grade.
    """

    def __init__(self, instance: Instance):
        self.instance = instance
        self.y: list[int] = [0] * instance.num_vertices
        for v, r in instance.required.items():
            self.y[v] = r
        self.w: list[list[int]] = [
            [c.micros for c in ladder] for ladder in instance.costs
        ]
        self.trees: dict[int, set[int]] = {
            v: {v} for v in instance.terminals
        }
        self.version = 0

    def __len__(self) -> int:
        return len(self.trees)

    def roots(self) -> list[int]:
        return sorted(self.trees)

    def weight(self, v: int, grade: int) -> Cost:
        return Cost.from_micros(self.w[v][grade - 1])

    def assignment(self) -> GradeAssignment:
        return tuple(self.y)


def init_forest(instance: Instance) -> GrtForest:
    """Singleton tree per terminal; grades at requirements, weights at costs."""
    assert_valid(instance)
    return GrtForest(instance)


def graded_shortest_paths(
    forest: GrtForest, source: int, grade: int
) -> GradedDistanceRow:
    """Dijkstra over vertex weights for one grade, endpoint costs excluded.

    Ties settle by vertex id, so predecessor chains are reproducible.
    """
    if not 1 <= grade <= forest.instance.grades:
        raise InputError(f"grade {grade} out of range")
    n = forest.instance.num_vertices
    w = [forest.w[v][grade - 1] for v in range(n)]
    adjacency = forest.instance.adjacency
    INF = float("inf")
    dist: list = [INF] * n  # path weight excluding source, including target
    preds = [-1] * n
    dist[source] = 0
    heap: list[tuple[int, int]] = [(0, source)]
    done = [False] * n
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for v in adjacency[u]:
            if done[v]:
                continue
            cand = d + w[v]
            if cand < dist[v]:
                dist[v] = cand
                preds[v] = u
                heapq.heappush(heap, (cand, v))
    interior = tuple(
        0 if v == source else (dist[v] - w[v] if dist[v] != INF else -1)
        for v in range(n)
    )
    if any(d == -1 for d in interior):
        raise InternalInvariantError("graph must be connected")
    return GradedDistanceRow(
        source=source, grade=grade, interior_micros=interior, preds=tuple(preds)
    )


class _RootTables:
    """Per-root distance rows, one per grade up to the root's requirement."""

    def __init__(self, forest: GrtForest):
        self.rows: dict[tuple[int, int], GradedDistanceRow] = {}
        for root in forest.roots():
            top = forest.instance.required[root]
            for grade in range(1, top + 1):
                self.rows[(root, grade)] = graded_shortest_paths(forest, root, grade)

    def row(self, root: int, grade: int) -> GradedDistanceRow:
        return self.rows[(root, grade)]


def _candidates_for(
    forest: GrtForest, center: int, grade: int, tables: _RootTables
):
    """Yield the ratio-minimal merge candidates for one (center, grade) pair.

    Trees whose root demands at most ``grade`` are sorted by their distance
    to the center under their own grade; the best subset of each size is a
    prefix of that order. Two root choices exist: the nearest tree with a
    strictly higher demand (connected at ``grade``), or promoting a
    highest-demand tree out of the prefix itself, in which case the center
    grade equals that demand — prefixes whose top demand is lower are
    produced by the scan at that lower grade instead.
    """
    instance = forest.instance
    required = instance.required
    eligible = []  # (native distance, root id)
    outside = []  # roots with demand above `grade`
    for root in forest.roots():
        r = required[root]
        if r <= grade:
            native = tables.row(root, r).interior_micros[center]
            eligible.append((native, root))
        else:
            outside.append(root)
    eligible.sort()
    w_center = forest.w[center][grade - 1]

    if outside and eligible:
        best_root = min(
            outside, key=lambda r: (tables.row(r, grade).interior_micros[center], r)
        )
        root_dist = tables.row(best_root, grade).interior_micros[center]
        prefix_sum = 0
        for m, (native, root) in enumerate(eligible, start=1):
            prefix_sum += native
            numerator = root_dist + w_center + prefix_sum
            yield _build_candidate(
                forest,
                tables,
                root=best_root,
                center=center,
                grade=grade,
                subset=[r for _, r in eligible[:m]],
                numerator=numerator,
            )

    # Promoted root: merge a prefix on its own, rooted at a tree whose
    # demand equals the prefix maximum. Only emitted when that maximum is
    # exactly `grade`, keeping each such candidate to a single scan slot.
    prefix_sum = 0
    prefix_max = 0
    for m, (native, root) in enumerate(eligible, start=1):
        prefix_sum += native
        prefix_max = max(prefix_max, required[root])
        if m < 2 or prefix_max != grade:
            continue
        promoted = min(r for _, r in eligible[:m] if required[r] == prefix_max)
        numerator = w_center + prefix_sum
        yield _build_candidate(
            forest,
            tables,
            root=promoted,
            center=center,
            grade=grade,
            subset=[r for _, r in eligible[:m] if r != promoted],
            numerator=numerator,
        )


def _build_candidate(
    forest: GrtForest,
    tables: _RootTables,
    root: int,
    center: int,
    grade: int,
    subset: list[int],
    numerator: int,
) -> MergeCandidate:
    required = forest.instance.required
    merged = 1 + len(subset)
    # External roots connect at the candidate grade; promoted roots have
    # required == grade, so this row is always present.
    root_row = tables.row(root, min(grade, required[root]))
    leg_paths = tuple(
        tuple(reversed(tables.row(r, required[r]).path_to(center))) for r in subset
    )
    return MergeCandidate(
        root=root,
        center=center,
        grade=grade,
        subset_roots=tuple(sorted(subset)),
        gamma=Fraction(numerator, merged * COST_SCALE),
        numerator_micros=numerator,
        root_path=root_row.path_to(center),
        leg_paths=leg_paths,
        forest_version=forest.version,
    )


def best_candidate_for(
    forest: GrtForest, center: int, grade: int, tables: _RootTables | None = None
) -> MergeCandidate | None:
    """Ratio-minimal legal merge for a fixed center and grade, if any."""
    if len(forest) < 2:
        raise InputError("need at least two trees to merge")
    if tables is None:
        tables = _RootTables(forest)
    best: MergeCandidate | None = None
    for cand in _candidates_for(forest, center, grade, tables):
        if best is None or cand.sort_key() < best.sort_key():
            best = cand
    return best


def select_global_candidate(
    forest: GrtForest, tables: _RootTables | None = None
) -> MergeCandidate:
    """Scan every (center, grade) pair and return the overall best merge."""
    if len(forest) < 2:
        raise InputError("need at least two trees to merge")
    if tables is None:
        tables = _RootTables(forest)
    best: MergeCandidate | None = None
    for center in range(forest.instance.num_vertices):
        for grade in range(1, forest.instance.grades + 1):
            for cand in _candidates_for(forest, center, grade, tables):
                if best is None or cand.sort_key() < best.sort_key():
                    best = cand
    if best is None:
        raise InternalInvariantError("no legal merge found with two or more trees")
    return best


def apply_merge(forest: GrtForest, candidate: MergeCandidate) -> IterationRecord:
    """Execute a merge: lift grades along its paths, refresh weights,
    replace the participating trees by one tree rooted at the candidate root.
    """
    if candidate.forest_version != forest.version:
        raise StaleCandidateError(
            "candidate was computed against an older forest state"
        )
    instance = forest.instance
    required = instance.required

    targets: dict[int, int] = {}
    for v in candidate.root_path:
        targets[v] = max(targets.get(v, 0), candidate.grade)
    for path, r in zip(candidate.leg_paths, candidate.subset_roots):
        for v in path:
            targets[v] = max(targets.get(v, 0), required[r])

    incurred = 0
    for v, target in targets.items():
        if target > forest.y[v]:
            incurred += (
                instance.cost_of(v, target).micros
                - instance.cost_of(v, forest.y[v]).micros
            )
            forest.y[v] = target

    members = set(targets)
    members |= forest.trees[candidate.root]
    for r in candidate.subset_roots:
        members |= forest.trees[r]

    # Incremental weights: everything at or below the new grade is paid
    # for; higher grades cost only the remaining increment.
    for v in members:
        y_v = forest.y[v]
        paid = forest.w[v][y_v - 1] if y_v >= 1 else 0
        row = forest.w[v]
        for j in range(instance.grades):
            if j + 1 <= y_v:
                row[j] = 0
            else:
                row[j] -= paid

    del forest.trees[candidate.root]
    for r in candidate.subset_roots:
        del forest.trees[r]
    forest.trees[candidate.root] = members
    forest.version += 1

    record = IterationRecord(
        gamma=candidate.gamma,
        merged_count=candidate.merged_count,
        incurred_cost=Cost.from_micros(incurred),
        root=candidate.root,
        center=candidate.center,
        grade=candidate.grade,
        subset_roots=candidate.subset_roots,
    )
    if record.incurred_cost.as_fraction() > candidate.gamma * record.merged_count:
        raise InternalInvariantError(
            "incurred cost exceeded the candidate's computed cost"
        )
    return record


def solve_greedy(instance: Instance) -> SolutionReport:
    """Run the merge loop to a single tree and report the solution.

    Requires a normalized instance (zero terminal ladders up to each
    requirement, top grade demanded by some terminal).
    """
    forest = init_forest(instance)
    records: list[IterationRecord] = []
    while len(forest) > 1:
        candidate = select_global_candidate(forest)
        records.append(apply_merge(forest, candidate))
    y = forest.assignment()
    try:
        edges = extract_tree(instance, y)
    except InfeasibleAssignmentError as exc:
        raise InternalInvariantError(f"greedy produced an infeasible result: {exc}")
    total = Cost.from_micros(sum(r.incurred_cost.micros for r in records))
    if total != solution_cost(instance, y):
        raise InternalInvariantError(
            "iteration costs do not add up to the assignment cost"
        )
    return SolutionReport(
        assignment=y,
        tree_edges=edges,
        total_cost=total,
        iterations=tuple(records),
    )
