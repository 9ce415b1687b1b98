"""Exact solvers for single-machine scheduling with a rented external resource.

Four problem families over four scheduling objectives: renting period
budgeted, scheduling cost budgeted, the bi-objective Pareto front, and the
composite cost with a linear rental rate.
"""

from .composite import (
    LambdaSets,
    lambda_sets,
    lambda_thresholds,
    solve_composite_twc,
    solve_composite_via_pareto,
)
from .errors import (
    BadSource,
    Infeasible,
    InvalidBlockSets,
    NotAPermutation,
    ParseError,
    SchedulingError,
    TooLarge,
)
from .instances import (
    ReductionCertificate,
    evenodd_reduction,
    parse,
    parse_document,
    partition_reduction,
    random_instance,
    serialize,
)
from .max_lateness import (
    LmaxTables,
    build_lmax_tables,
    pareto_lmax,
    solve_er_budget_lmax,
    solve_lmax_budget_er,
)
from .model import (
    Composite,
    ErBudget,
    GammaBudget,
    Instance,
    Job,
    Mode,
    Objective,
    OrderedView,
    Pareto,
    ParetoFront,
    ParetoPoint,
    ProblemSpec,
    ScheduleMetrics,
    Sequence,
    Solution,
    evaluate,
    five_block_sequence,
    ordered_view,
    tardy_block_sequence,
)
from .oracle import OracleReport, brute_force, enumerate_report
from .tardy_weight import (
    TardyTables,
    build_theta5,
    pareto_wu,
    solve_er_budget_wu,
    solve_wu_budget_er,
    suffix_ontime_dp,
)
from .weighted_completion import (
    MinCostWindowAtMost,
    MinCostWindowExactly,
    MinWindowCostAtMost,
    PairSearchResult,
    XYTables,
    build_xy_tables_theta1,
    build_xy_tables_theta2,
    pair_search,
    pareto_twc,
    solve_er_budget_twc,
    solve_tc_variants,
    solve_twc_budget_er,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
