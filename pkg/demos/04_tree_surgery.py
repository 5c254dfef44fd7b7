"""Grade-respecting trees: checking, demoting, and carving into spiders.

A tree is grade-respecting when grades never rise on the way down from
the root. Demotion against a marked vertex set prunes branches that miss
the set and drops every unmarked vertex to the highest marked grade below
it. A demoted tree then splits into vertex-disjoint "rooted spiders"
(one branch vertex each, marked feet), and the spider count plus feet
always add up to the marked set exactly - the bookkeeping behind the
greedy solver's quality guarantee.

Run: python demos/04_tree_surgery.py
"""

from vgsst import Instance, check_grt, m_optimize, spider_decompose

# A 13-vertex, 4-grade tree; marked vertices play the role the terminals
# of an optimal solution play in the analysis.
edges = [
    (0, 7), (0, 4), (0, 2), (0, 1), (7, 8), (7, 9),
    (9, 10), (9, 11), (9, 12), (4, 5), (4, 6), (2, 3),
]
grades = (4, 3, 3, 2, 3, 2, 1, 2, 2, 2, 2, 1, 2)
marked = {0, 2, 5, 6, 9, 10, 11}
host = Instance.build(13, edges, 4, {0: 4}, [[0, 0, 0, 0]] * 13)

ok, _ = check_grt(host, edges, grades, 0)
print("input is grade-respecting:", ok)

bad = list(grades)
bad[7] = 1  # now 7 -> 9 rises from 1 to 2
ok, path = check_grt(host, edges, tuple(bad), 0)
print("tampered copy rejected, offending path:", path)

pruned, demoted = m_optimize(host, edges, grades, 0, marked)
print("\nafter demotion against", sorted(marked))
print("kept edges:", pruned)
print("grades:", demoted, "(vertex 4 dropped from 3 to 2; four leaves gone)")

result = spider_decompose(host, pruned, demoted, 0, marked)
print("\nspiders:")
for s in result.spiders:
    print(
        f"  root {s.root} center {s.center} members {sorted(s.members)} "
        f"feet {s.feet} legs {s.legs}"
    )
total = sum(1 + len(s.feet) for s in result.spiders)
print(f"sum over spiders of (1 + feet) = {total} = marked set size {len(marked)}")
