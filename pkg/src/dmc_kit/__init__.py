"""Exact tools for discrete midpoint convex functions on Z^n."""

from .classify import (
    CrossCheckError,
    Verdict,
    Witness,
    check_dmc_at,
    check_parallelogram,
    check_parallelogram_pair,
    is_dmc_set,
    is_globally_dmc,
    is_integrally_convex,
    is_lnat,
    is_locally_dmc,
    is_submodular,
    restricted_midpoint_insufficiency_demo,
)
from .dmcset import (
    Decomposition,
    PointSet,
    check_conditions,
    critical_check,
    d0_decompose,
    d1_decompose,
    d2_decompose,
    parallelogram_points,
    scale_set,
    set_membership_sweep,
    steps_decompose,
)
from .envelope import EnvelopeResult, envelope_value, weak_midpoint_gap
from .funcs import (
    CallableFn,
    DocumentError,
    FnOracle,
    IndicatorFn,
    LinearOnSetFn,
    QuadraticFn,
    SeparableConvexFn,
    TableFn,
    load_function,
    negate_all,
    permute,
    scale_fn,
    sum_fns,
    translate,
    weighted_sum,
)
from .lattice import INF, Box, StepChain, midpoint_round, parse_box, step_decompose
from .optimize import (
    DescentTrace,
    ScalingTrace,
    alpha_local_check,
    box_barrier_check,
    brute_force_min,
    local_min_check,
    neighborhood2_minimize,
    proximity_verify,
    scaling_minimize,
    steepest_descent_2n,
)
from .quadratic import (
    QuadReport,
    quad_2d_closed_form,
    quad_classify,
    quad_eigen_sufficient,
    quad_row_sum_sufficient,
)

__version__ = "0.1.0"
