"""Coupled coincidence point iteration on metric spaces.

The package solves g(x') = F(x, y), g(y') = F(y, x) iterations for
contractive couplings between two subsets, checks the defining
properties on seeded samples, certifies geometric decay bounds on the
recorded orbit, and cross-validates everything against an exact
brute-force oracle on finite spaces.
"""

from .metric import (
    CoupledFPError,
    MetricSpace,
    Point,
    SubsetPair,
    ValidationError,
    box_pair,
    check_metric_axioms,
    finite_space,
    index_pair,
    interval_pair,
    membership,
    real_line,
    real_vector,
    union_sampler,
)
from .mappings import (
    CheckReport,
    CoupledMap,
    SelfMap,
    UnsupportedCheckError,
    check_banach_coupling,
    check_commutativity,
    check_coupled_banach_contraction,
    check_injectivity,
    estimate_contraction_constant,
    is_coupled_coincidence_point,
    is_coupling,
    is_cyclic,
    is_g_coupling,
    is_self_cyclic,
    test_g_coupling_implies_coupling,
)
from .solver import (
    Assumptions,
    IterationTrace,
    MembershipError,
    PreimageError,
    ProblemInstance,
    SolveResult,
    SolverConfig,
    StrongPoint,
    StrongPointError,
    a_priori_iterations,
    check_coincidence_pullback,
    check_contraction_composition,
    extract_strong_point,
    iterate_once,
    residual_pair,
    solve_coupled_coincidence,
    solve_result_document,
    trace_from_csv,
    trace_to_csv,
    uniqueness_probe,
    verify_symmetric_point,
    verify_trace_bounds,
)
from .oracle import (
    ExactVerdict,
    FiniteProblem,
    brute_force_coincidence_points,
    commuting_modular_problem,
    exhaustive_definition_check,
    exhaustive_report,
    min_contraction_constant,
    random_finite_problem,
    strong_coincidence_points,
    to_instance,
)
from .problems import (
    BUILTIN_NAMES,
    ProblemSpec,
    affine_problem,
    builtin_problem,
    builtin_spec,
    finite_problem_of,
    instantiate,
    load_problem,
    load_spec,
    parse_spec,
    save_spec,
    serialize_spec,
)

__version__ = "0.1.0"
