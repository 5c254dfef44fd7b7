"""Layered heuristics: grade-factor bounds, tightness family, subroutines."""

import math
from fractions import Fraction

import pytest

from vgsst import (
    Cost,
    Instance,
    VstContractError,
    brute_force_optimum,
    check_feasible,
    exact_vst,
    fig2_instance,
    greedy_as_vst,
    single_grade_view,
    solve_bottomup,
    solve_greedy,
    solve_topdown,
)

from conftest import mixed_corpus


# ---------------------------------------------------------------------------
# Hub-and-chain tightness family


def test_family_shape():
    inst = fig2_instance(3)
    assert inst.num_vertices == 8
    assert inst.grades == 3
    assert inst.required == {0: 3, 1: 1, 2: 2, 3: 3}
    hub = 7
    assert all(c == Cost.parse("1.1") for c in inst.costs[hub])
    assert set(inst.adjacency[hub]) == {0, 1, 2, 3}


def test_topdown_pays_one_unit_per_grade():
    inst = fig2_instance(3)
    report = solve_topdown(inst, exact_vst)
    assert report.total_cost == Cost.parse(3)
    # Connectors bought, hub avoided.
    hub = 7
    assert report.assignment[hub] == 0
    assert report.grade_costs == (Cost.parse(1), Cost.parse(1), Cost.parse(1))


def test_exact_optimum_buys_the_hub():
    inst = fig2_instance(3)
    report = brute_force_optimum(inst, limit=8)
    assert report.total_cost == Cost.parse("1.1")
    assert report.assignment[7] == 3


@pytest.mark.parametrize("levels", [2, 3, 4, 5])
def test_family_ratio_scales_with_grades(levels):
    inst = fig2_instance(levels)
    top = solve_topdown(inst, exact_vst).total_cost
    opt = brute_force_optimum(inst, limit=inst.num_vertices).total_cost
    assert top == Cost.parse(levels)
    assert opt == Cost.parse("1.1")
    assert Fraction(top.micros, opt.micros) == Fraction(levels * 10, 11)


# ---------------------------------------------------------------------------
# Top-down general behavior


def test_topdown_single_grade_equals_subroutine(fig3):
    inst = Instance.build(
        5,
        [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)],
        1,
        {0: 1, 2: 1},
        [[0], [2], [0], [3], [4]],
    )
    report = solve_topdown(inst, exact_vst)
    direct = exact_vst(single_grade_view(inst, 1, inst.terminals))
    cost = Cost.zero()
    for v in direct:
        cost = cost + inst.costs[v][0]
    assert report.total_cost == cost


def test_topdown_never_demotes_and_stays_feasible():
    for inst in mixed_corpus(40, seed0=6100):
        report = solve_topdown(inst, greedy_as_vst)
        ok, _ = check_feasible(inst, report.assignment)
        assert ok
        for t, r in inst.required.items():
            assert report.assignment[t] >= r


def test_topdown_with_exact_subroutine_meets_grade_factor():
    for inst in mixed_corpus(40, seed0=6200):
        report = solve_topdown(inst, exact_vst)
        optimum = brute_force_optimum(inst).total_cost
        assert report.total_cost.micros <= inst.grades * optimum.micros
        # Per-grade spend never exceeds the optimum either.
        assert sum(c.micros for c in report.grade_costs) == report.total_cost.micros
        for spend in report.grade_costs:
            assert spend.micros <= optimum.micros


def test_topdown_rejects_broken_subroutine(fig3):
    def broken(view):
        return frozenset({min(view.terminals)})

    with pytest.raises(VstContractError):
        solve_topdown(fig3, broken)


# ---------------------------------------------------------------------------
# Bottom-up


def test_bottomup_builtin_feasible(fig3):
    report = solve_bottomup(fig3, greedy_as_vst)
    ok, _ = check_feasible(fig3, report.assignment)
    assert ok
    assert report.total_cost >= brute_force_optimum(fig3).total_cost


def test_bottomup_single_grade_equals_topdown():
    for inst in mixed_corpus(15, seed0=6300, max_levels=1):
        bu = solve_bottomup(inst, exact_vst)
        td = solve_topdown(inst, exact_vst)
        assert bu.total_cost == td.total_cost


def test_bottomup_feasible_on_corpus():
    for inst in mixed_corpus(40, seed0=6400):
        report = solve_bottomup(inst, greedy_as_vst)
        ok, _ = check_feasible(inst, report.assignment)
        assert ok


def _sticky_hub_instance() -> Instance:
    """The top-grade tree routes through a vertex that is free at grade 1
    but expensive at grade 2 and sits between the two top-demand
    terminals, so demotion cannot rescue it."""
    return Instance.build(
        5,
        [(0, 3), (1, 3), (2, 3), (0, 4), (1, 4)],
        2,
        {0: 2, 1: 2, 2: 1},
        [[0, 0], [0, 0], [0, 40], [0, 50], [30, 30]],
    )


def test_bottomup_loses_on_sticky_hub():
    inst = _sticky_hub_instance()
    bu = solve_bottomup(inst, exact_vst)
    greedy = solve_greedy(inst)
    optimum = brute_force_optimum(inst)
    assert optimum.total_cost == Cost.parse(30)
    assert greedy.total_cost == Cost.parse(30)
    assert bu.total_cost == Cost.parse(50)
    assert bu.total_cost > greedy.total_cost
    assert Fraction(bu.total_cost.micros, optimum.total_cost.micros) > 1


# ---------------------------------------------------------------------------
# Subroutines


def test_greedy_subroutine_two_terminals_is_min_cost_path():
    inst = Instance.build(
        5,
        [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)],
        1,
        {0: 1, 2: 1},
        [[0], [2], [0], [3], [4]],
    )
    view = single_grade_view(inst, 1, inst.terminals)
    spanned = greedy_as_vst(view)
    exact = exact_vst(view)
    cost = lambda s: sum(inst.costs[v][0].micros for v in s)
    assert cost(spanned) == cost(exact) == 2_000_000


def test_greedy_subroutine_avoids_pricier_hub():
    inst = fig2_instance(3)
    view = single_grade_view(
        inst, 3, [t for t in inst.terminals if inst.required[t] == 3]
    )
    spanned = greedy_as_vst(view)
    assert 7 not in spanned  # hub
    assert spanned == {0, 3, 6}  # anchor, top chain terminal, their connector


def test_greedy_subroutine_handles_costly_terminals():
    # Terminals with positive cost in the single-grade view: the answer
    # must still contain and connect them.
    inst = Instance.build(
        4, [(0, 1), (1, 2), (2, 3)], 1, {0: 1, 3: 1}, [[2], [1], [1], [3]]
    )
    view = single_grade_view(inst, 1, [0, 3])
    spanned = greedy_as_vst(view)
    assert spanned == {0, 1, 2, 3}


def test_greedy_subroutine_near_optimal_on_corpus():
    for inst in mixed_corpus(30, seed0=6500, max_levels=1):
        view = single_grade_view(inst, 1, inst.terminals)
        spanned = greedy_as_vst(view)
        exact = exact_vst(view)
        spanned_cost = sum(inst.costs[v][0].micros for v in spanned)
        exact_cost = sum(inst.costs[v][0].micros for v in exact)
        t = len(inst.terminals)
        if exact_cost == 0:
            assert spanned_cost == 0
        else:
            assert spanned_cost <= 2 * math.log(t) * exact_cost
