"""Multi-grade node-weighted Steiner tree toolkit.

Exact-arithmetic solvers for the problem of buying graded facilities on
graph vertices so that every terminal reaches every other through
facilities at or above the lower of their two demands:

- a greedy tree-merging solver with a logarithmic quality guarantee,
- layered top-down and bottom-up heuristics over a pluggable
  single-grade subroutine,
- exhaustive oracles (assignment search, layered-digraph arborescence)
  and a cut-based 0/1 model with LP export, used as ground truth,
- structural checkers: feasibility, grade-respecting trees, subtree
  demotion and rooted spider decompositions.
"""

from .costs import COST_SCALE, Cost, CostPrecisionError, format_fraction, ratio
from .generators import fig2_instance, fig3_instance, random_instance
from .greedy import (
    GradedDistanceRow,
    GrtForest,
    MergeCandidate,
    StaleCandidateError,
    apply_merge,
    best_candidate_for,
    graded_shortest_paths,
    init_forest,
    select_global_candidate,
    solve_greedy,
)
from .heuristics import (
    VstContractError,
    VstSubroutine,
    greedy_as_vst,
    single_grade_view,
    solve_bottomup,
    solve_topdown,
)
from .instance import (
    EdgeWeightedInstance,
    FeasibilityWitness,
    GradeAssignment,
    InfeasibleAssignmentError,
    InputError,
    Instance,
    InternalInvariantError,
    IterationRecord,
    NormalizeResult,
    SizeCapError,
    SolutionReport,
    VgsstError,
    Violation,
    check_feasible,
    denormalize_solution,
    edge_costs_to_vertex_costs,
    extract_tree,
    normalize,
    solution_cost,
    validate,
)
from .io import (
    instance_from_json,
    instance_to_json,
    read_instance,
    read_solution,
    solution_from_json,
    solution_to_json,
)
from .oracle import (
    CutRow,
    IlpModel,
    IlpSolution,
    build_ilp,
    brute_force_optimum,
    exact_vst,
    export_lp,
    model_point_feasible,
    solve_ilp_by_enumeration,
)
from .reductions import (
    DstInstance,
    RootedSpiderDecomposition,
    Spider,
    brute_force_dst,
    check_grt,
    m_optimize,
    reduce_to_dst,
    spider_decompose,
)

__version__ = "0.1.0"

__all__ = [
    "COST_SCALE",
    "Cost",
    "CostPrecisionError",
    "CutRow",
    "DstInstance",
    "EdgeWeightedInstance",
    "FeasibilityWitness",
    "GradeAssignment",
    "GradedDistanceRow",
    "GrtForest",
    "IlpModel",
    "IlpSolution",
    "InfeasibleAssignmentError",
    "InputError",
    "Instance",
    "InternalInvariantError",
    "IterationRecord",
    "MergeCandidate",
    "NormalizeResult",
    "RootedSpiderDecomposition",
    "SizeCapError",
    "SolutionReport",
    "Spider",
    "StaleCandidateError",
    "VgsstError",
    "Violation",
    "VstContractError",
    "VstSubroutine",
    "apply_merge",
    "best_candidate_for",
    "brute_force_dst",
    "brute_force_optimum",
    "build_ilp",
    "check_feasible",
    "check_grt",
    "denormalize_solution",
    "edge_costs_to_vertex_costs",
    "exact_vst",
    "export_lp",
    "extract_tree",
    "fig2_instance",
    "fig3_instance",
    "format_fraction",
    "graded_shortest_paths",
    "greedy_as_vst",
    "init_forest",
    "instance_from_json",
    "instance_to_json",
    "m_optimize",
    "model_point_feasible",
    "normalize",
    "random_instance",
    "ratio",
    "read_instance",
    "read_solution",
    "reduce_to_dst",
    "select_global_candidate",
    "single_grade_view",
    "solution_cost",
    "solution_from_json",
    "solution_to_json",
    "solve_bottomup",
    "solve_greedy",
    "solve_ilp_by_enumeration",
    "solve_topdown",
    "spider_decompose",
    "validate",
]
