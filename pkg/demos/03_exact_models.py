"""Three independent exact routes to the same optimum.

The assignment oracle enumerates grade vectors in cost order; the
cut-based 0/1 model enforces per-grade connectivity through neighborhood
constraints (exportable as an LP file for external solvers); the layered
digraph rewrite turns the whole problem into a directed Steiner
arborescence question. All three agree, which is exactly what the test
suite leans on.

Run: python demos/03_exact_models.py
"""

from vgsst import (
    brute_force_dst,
    brute_force_optimum,
    build_ilp,
    export_lp,
    fig3_instance,
    random_instance,
    reduce_to_dst,
    solve_ilp_by_enumeration,
)

instance = fig3_instance()

oracle = brute_force_optimum(instance)
print("assignment oracle:", oracle.total_cost, oracle.assignment)

model = build_ilp(instance)
print(
    f"\ncut model: {model.num_variables} binaries, {len(model.cuts)} cut rows, "
    f"{model.num_constraints} constraints total"
)
solution = solve_ilp_by_enumeration(model)
print("model optimum:", solution.objective, solution.assignment)

lp_text = export_lp(model)
print("\nfirst LP lines:")
for line in lp_text.splitlines()[:6]:
    print(" ", line)

dst = reduce_to_dst(instance)
print(
    f"\nlayered digraph: {dst.num_nodes} nodes, {len(dst.arcs)} arcs, "
    f"{len(dst.terminals)} terminals, root node {dst.root}"
)
print("arborescence optimum:", brute_force_dst(dst, cap=16))

print("\nagreement on random instances (7 vertices, 2 grades):")
for seed in range(6):
    inst = random_instance(n=7, levels=2, seed=500 + seed, edge_prob=0.4, num_terminals=3)
    a = brute_force_optimum(inst).total_cost
    b = solve_ilp_by_enumeration(build_ilp(inst)).objective
    c = brute_force_dst(reduce_to_dst(inst))
    flag = "ok" if a == b == c else "MISMATCH"
    print(f"  seed {500 + seed}: oracle {a}, model {b}, arborescence {c}  [{flag}]")
