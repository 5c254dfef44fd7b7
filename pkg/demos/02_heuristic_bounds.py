"""Compare the layered heuristics against the greedy solver and the oracle.

Two stories here. First, the hub-and-chain family: the top-down pass pays
one unit per grade while the optimum buys a single hub for 1.1, so its
cost ratio grows linearly with the grade count. Second, the bottom-up
pass can get stuck: a vertex that is free at grade 1 but expensive at the
top grade, wedged between two top-demand terminals, cannot be demoted.

Run: python demos/02_heuristic_bounds.py
"""

from fractions import Fraction

from vgsst import (
    Instance,
    brute_force_optimum,
    exact_vst,
    fig2_instance,
    greedy_as_vst,
    random_instance,
    solve_bottomup,
    solve_greedy,
    solve_topdown,
)

print("hub-and-chain family (exact single-grade subroutine):")
print("grades  layered  optimum  ratio")
for levels in (2, 3, 4, 5):
    inst = fig2_instance(levels)
    top = solve_topdown(inst, exact_vst).total_cost
    opt = brute_force_optimum(inst, limit=inst.num_vertices).total_cost
    ratio = Fraction(top.micros, opt.micros)
    print(f"{levels:6}  {str(top):>7}  {str(opt):>7}  {float(ratio):.3f}")

print("\nsticky-hub instance where bottom-up cannot demote:")
sticky = Instance.build(
    5,
    [(0, 3), (1, 3), (2, 3), (0, 4), (1, 4)],
    2,
    {0: 2, 1: 2, 2: 1},
    [[0, 0], [0, 0], [0, 40], [0, 50], [30, 30]],
)
for name, report in [
    ("bottom-up", solve_bottomup(sticky, exact_vst)),
    ("greedy", solve_greedy(sticky)),
    ("optimum", brute_force_optimum(sticky)),
]:
    print(f"  {name:9} cost {report.total_cost}  grades {report.assignment}")

print("\nrandom head-to-head (9 vertices, 3 grades):")
print("seed  greedy  topdown  bottomup  optimum")
for seed in range(8):
    inst = random_instance(n=9, levels=3, seed=100 + seed, edge_prob=0.35, num_terminals=4)
    g = solve_greedy(inst).total_cost
    t = solve_topdown(inst, greedy_as_vst).total_cost
    b = solve_bottomup(inst, greedy_as_vst).total_cost
    o = brute_force_optimum(inst).total_cost
    print(f"{100 + seed}  {str(g):>6}  {str(t):>7}  {str(b):>8}  {str(o):>7}")
