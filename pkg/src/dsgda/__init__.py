"""Doubly smoothed gradient descent ascent for nonconvex-nonconcave
minimax problems on boxes, with the stationarity measures, Lyapunov
oracles, parameter analysis, and benchmark harness used to check the
method's claims numerically."""

from ._grid import GridSpec
from .analysis import (
    ConstantSet,
    DescentCheck,
    FeasibilityScan,
    RhoScan,
    check_descent_params,
    check_descent_params_dual,
    constants,
    descent_step_params,
    feasibility_scan,
    feasible_point,
    interaction_dominance,
    kl_ratio_scan,
    rho_value,
    universal_params,
    weak_mvi_rho,
)
from .errors import (
    ConfigError,
    DsgdaError,
    NumericsError,
    ParameterError,
    UnsupportedProblemError,
)
from .measures import (
    OutcomeClass,
    StationarityReport,
    classify,
    gs_bound_check,
    gs_residual,
    os_residual,
    stationarity_report,
)
from .oracle import (
    AuxPoints,
    DescentCertificate,
    LyapunovBreakdown,
    ValueFunctions,
    argmax_y,
    argmin_x,
    audit_descent,
    aux_points,
    descent_certificate,
    dual_descent_certificate,
    f_lower,
    f_upper,
    lyapunov_phi,
    proximal_error_bound_check,
    saddle,
    value_functions,
)
from .harness import (
    RunConfig,
    RunResult,
    export_trajectory,
    parse_config,
    run_batch,
    run_config,
    serialize_config,
)
from .problems import (
    BoxSet,
    KLSpec,
    MinimaxProblem,
    SmoothedState,
    builtin,
    eval_F,
    fd_gradient_check,
    grad_F_x,
    grad_F_y,
    project,
    registry_names,
)
from .recipes import RECIPE_NAMES, run_recipe
from .solvers import (
    AlgoParams,
    StoppingRule,
    Trajectory,
    dsgda_step,
    eg_step,
    gda_step,
    run,
    sgda_step,
)

__version__ = "0.1.0"
