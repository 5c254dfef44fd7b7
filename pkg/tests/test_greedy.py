"""Merge solver: worked-example trace, candidate search, invariants."""

import math
from fractions import Fraction

import pytest

from vgsst import (
    Cost,
    Instance,
    StaleCandidateError,
    apply_merge,
    best_candidate_for,
    brute_force_optimum,
    check_feasible,
    check_grt,
    graded_shortest_paths,
    init_forest,
    select_global_candidate,
    solution_cost,
    solve_greedy,
)
from vgsst.instance import spanning_tree_by_levels

from conftest import mixed_corpus


def _after_first_merge(fig3):
    forest = init_forest(fig3)
    apply_merge(forest, select_global_candidate(forest))
    return forest


# ---------------------------------------------------------------------------
# Initialization


def test_init_forest_singletons(fig3):
    forest = init_forest(fig3)
    assert forest.roots() == [0, 2, 5, 6]
    assert forest.trees == {0: {0}, 2: {2}, 5: {5}, 6: {6}}
    assert forest.assignment() == (2, 0, 1, 0, 0, 2, 1, 0)
    for v in range(8):
        for grade in (1, 2):
            assert forest.weight(v, grade) == fig3.costs[v][grade - 1]


def test_init_forest_two_terminals():
    inst = Instance.build(3, [(0, 1), (1, 2)], 1, {0: 1, 2: 1}, [[0], [4], [0]])
    assert len(init_forest(inst)) == 2


# ---------------------------------------------------------------------------
# Graded shortest paths


def test_distances_after_first_merge(fig3):
    forest = _after_first_merge(fig3)
    row = graded_shortest_paths(forest, 0, 2)
    # Interior of the 0..4 path at grade 2: vertices 1 (14) and 2 (8).
    assert row.distance_to(4) == Cost.parse(22)
    assert row.path_to(4) == (0, 1, 2, 4)
    row_e = graded_shortest_paths(forest, 4, 2)
    # 4..5 runs through vertex 7, whose grade-2 increment is now 1.
    assert row_e.distance_to(5) == Cost.parse(1)
    assert row_e.path_to(5) == (4, 7, 5)


def test_adjacent_distance_is_zero(fig3):
    forest = init_forest(fig3)
    for grade in (1, 2):
        row = graded_shortest_paths(forest, 0, grade)
        assert row.distance_to(1) == Cost.zero()
        assert row.distance_to(0) == Cost.zero()


# ---------------------------------------------------------------------------
# Candidate search


def test_best_candidate_first_round(fig3):
    forest = init_forest(fig3)
    cand = best_candidate_for(forest, center=4, grade=1)
    assert cand.root == 5
    assert cand.subset_roots == (2, 6)
    assert cand.gamma == Fraction(4, 3)
    assert cand.root_path == (5, 7, 4)
    assert cand.leg_paths == ((4, 2), (4, 6))


def test_best_candidate_second_round(fig3):
    forest = _after_first_merge(fig3)
    cand = best_candidate_for(forest, center=4, grade=2)
    assert cand.root == 0
    assert cand.subset_roots == (5,)
    assert cand.gamma == Fraction(13)


def test_no_candidate_when_no_tree_fits_under_grade(fig3):
    forest = _after_first_merge(fig3)
    # Both remaining roots demand grade 2, so nothing is mergeable at 1.
    assert best_candidate_for(forest, center=4, grade=1) is None


def test_global_candidate_first_round(fig3):
    forest = init_forest(fig3)
    cand = select_global_candidate(forest)
    assert (cand.root, cand.center, cand.grade) == (5, 4, 1)
    assert cand.subset_roots == (2, 6)
    assert cand.gamma == Fraction(4, 3)


def test_global_candidate_second_round(fig3):
    forest = _after_first_merge(fig3)
    cand = select_global_candidate(forest)
    assert cand.gamma == Fraction(13)
    assert cand.grade == 2
    assert cand.merged_count == 2


def test_zero_ratio_candidate_selected():
    # Two terminals joined through a free vertex: the first merge is free.
    inst = Instance.build(
        3, [(0, 1), (1, 2)], 1, {0: 1, 2: 1}, [[0], [0], [0]]
    )
    forest = init_forest(inst)
    cand = select_global_candidate(forest)
    assert cand.gamma == Fraction(0)


# ---------------------------------------------------------------------------
# Merges


def test_first_merge_updates_state(fig3):
    forest = init_forest(fig3)
    record = apply_merge(forest, select_global_candidate(forest))
    assert record.incurred_cost == Cost.parse(4)
    assert record.merged_count == 3
    assert len(forest) == 2
    assert forest.weight(4, 1) == Cost.zero()
    assert forest.weight(4, 2) == Cost.parse(3)
    assert forest.trees[5] == {2, 4, 5, 6, 7}


def test_second_merge_finishes(fig3):
    forest = _after_first_merge(fig3)
    record = apply_merge(forest, select_global_candidate(forest))
    assert record.incurred_cost == Cost.parse(26)
    assert len(forest) == 1
    assert forest.assignment() == (2, 2, 2, 0, 2, 2, 1, 2)


def test_merge_along_paid_paths_costs_nothing():
    inst = Instance.build(
        3, [(0, 1), (1, 2)], 1, {0: 1, 2: 1}, [[0], [0], [0]]
    )
    forest = init_forest(inst)
    record = apply_merge(forest, select_global_candidate(forest))
    assert record.incurred_cost == Cost.zero()


def test_stale_candidate_rejected(fig3):
    forest = init_forest(fig3)
    cand = select_global_candidate(forest)
    apply_merge(forest, cand)
    with pytest.raises(StaleCandidateError):
        apply_merge(forest, cand)


# ---------------------------------------------------------------------------
# Full solve


def test_full_run_on_builtin(fig3):
    report = solve_greedy(fig3)
    assert report.total_cost == Cost.parse(30)
    assert [rec.gamma for rec in report.iterations] == [Fraction(4, 3), Fraction(13)]
    assert [rec.incurred_cost for rec in report.iterations] == [
        Cost.parse(4),
        Cost.parse(26),
    ]
    ok, _ = check_feasible(fig3, report.assignment)
    assert ok


def test_single_terminal_instance_is_free():
    inst = Instance.build(3, [(0, 1), (1, 2)], 2, {1: 2}, [[5, 9], [0, 0], [1, 1]])
    report = solve_greedy(inst)
    assert report.total_cost == Cost.zero()
    assert report.iterations == ()
    assert report.assignment == (0, 2, 0)


def test_free_instance_solves_free():
    # Every vertex already affordable at requirement: all ratios are zero.
    inst = Instance.build(
        4,
        [(0, 1), (1, 2), (2, 3)],
        2,
        {0: 2, 3: 2},
        [[0, 0], [0, 0], [0, 0], [0, 0]],
    )
    report = solve_greedy(inst)
    assert report.total_cost == Cost.zero()
    assert all(rec.gamma == 0 for rec in report.iterations)


def test_determinism(fig3):
    assert solve_greedy(fig3) == solve_greedy(fig3)
    corpus = mixed_corpus(10, seed0=4100)
    for inst in corpus:
        assert solve_greedy(inst) == solve_greedy(inst)


# ---------------------------------------------------------------------------
# Invariants over random instances


def test_iteration_structure_invariants():
    for inst in mixed_corpus(40, seed0=4200):
        report = solve_greedy(inst)
        assert len(report.iterations) <= len(inst.terminals) - 1
        for rec in report.iterations:
            assert rec.merged_count >= 2
            # The computed ratio may overcount shared vertices, never the
            # other way around.
            assert (
                rec.incurred_cost.as_fraction() <= rec.gamma * rec.merged_count
            )


def test_forest_shrinks_and_weights_stay_consistent():
    for inst in mixed_corpus(20, seed0=4300):
        forest = init_forest(inst)
        sizes = [len(forest)]
        while len(forest) > 1:
            apply_merge(forest, select_global_candidate(forest))
            sizes.append(len(forest))
            for v in range(inst.num_vertices):
                y_v = forest.y[v]
                paid = inst.cost_of(v, y_v)
                for grade in range(1, inst.grades + 1):
                    ladder = inst.cost_of(v, grade)
                    expected = (
                        ladder - paid if ladder > paid else Cost.zero()
                    )
                    assert forest.weight(v, grade) == expected
            for root, members in forest.trees.items():
                assert forest.y[root] == inst.required[root]
                assert max(forest.y[m] for m in members) == forest.y[root]
        assert all(a > b for a, b in zip(sizes, sizes[1:]))


def test_every_intermediate_tree_is_grade_respecting():
    # Rebuild each tree's edges from its member set level-by-level and
    # check grades never increase away from the root.
    for inst in mixed_corpus(20, seed0=4400):
        forest = init_forest(inst)
        while len(forest) > 1:
            apply_merge(forest, select_global_candidate(forest))
            for root, members in forest.trees.items():
                edges = spanning_tree_by_levels(
                    inst, forest.y, allowed=members
                )
                assert len(edges) == len(members) - 1
                ok, path = check_grt(inst, edges, tuple(forest.y), root)
                assert ok, f"grade rose along {path}"


def test_matches_logarithmic_bound_against_oracle():
    for inst in mixed_corpus(60, seed0=4500):
        report = solve_greedy(inst)
        optimum = brute_force_optimum(inst)
        assert report.total_cost >= optimum.total_cost
        t = len(inst.terminals)
        if optimum.total_cost == Cost.zero():
            assert report.total_cost == Cost.zero()
        else:
            bound = 2 * math.log(t) * optimum.total_cost.micros
            assert report.total_cost.micros <= bound


def test_single_grade_matches_quotient_merge_bound():
    # At one grade with free terminals this is the classic node-weighted
    # merge algorithm; same logarithmic bound against the oracle.
    for inst in mixed_corpus(30, seed0=4600, max_levels=1):
        report = solve_greedy(inst)
        optimum = brute_force_optimum(inst)
        t = len(inst.terminals)
        if optimum.total_cost == Cost.zero():
            assert report.total_cost == Cost.zero()
        else:
            assert (
                report.total_cost.micros
                <= 2 * math.log(t) * optimum.total_cost.micros
            )


def test_reported_cost_matches_assignment_cost():
    for inst in mixed_corpus(30, seed0=4700):
        report = solve_greedy(inst)
        assert report.total_cost == solution_cost(inst, report.assignment)
        support = {v for v, g in enumerate(report.assignment) if g >= 1}
        touched = {v for e in report.tree_edges for v in e}
        if len(support) > 1:
            assert touched == support
            assert len(report.tree_edges) == len(support) - 1


def _exhaustive_best_gamma(forest):
    """Reference search: every legal (root, center, grade, subset) combo.

    Subsets are unrestricted (not just prefixes), so this certifies that
    the prefix-based scan really attains the global minimum ratio.
    """
    from itertools import combinations

    from vgsst import graded_shortest_paths

    inst = forest.instance
    roots = forest.roots()
    rows = {}
    for r in roots:
        for grade in range(1, inst.required[r] + 1):
            rows[(r, grade)] = graded_shortest_paths(forest, r, grade)
    best = None
    for center in range(inst.num_vertices):
        for grade in range(1, inst.grades + 1):
            for root in roots:
                if inst.required[root] < grade:
                    continue
                others = [
                    r for r in roots if r != root and inst.required[r] <= grade
                ]
                root_dist = rows[(root, grade)].interior_micros[center]
                for size in range(1, len(others) + 1):
                    for subset in combinations(others, size):
                        total = (
                            root_dist
                            + forest.w[center][grade - 1]
                            + sum(
                                rows[(r, inst.required[r])].interior_micros[center]
                                for r in subset
                            )
                        )
                        gamma = Fraction(total, (1 + size) * 1_000_000)
                        if best is None or gamma < best:
                            best = gamma
    return best


def test_selection_attains_exhaustive_minimum():
    from vgsst import random_instance

    corpus = mixed_corpus(25, seed0=4800, max_n=8)
    # Wider forests stress non-prefix subsets harder.
    corpus += [
        random_instance(
            n=9, levels=3, seed=4900 + k, edge_prob=0.4, num_terminals=6
        )
        for k in range(8)
    ]
    for inst in corpus:
        forest = init_forest(inst)
        while len(forest) > 1:
            cand = select_global_candidate(forest)
            reference = _exhaustive_best_gamma(forest)
            assert cand.gamma == reference, (
                f"scan found {cand.gamma}, exhaustive search {reference}"
            )
            apply_merge(forest, cand)
