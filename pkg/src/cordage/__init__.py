"""Networks of cords: configuration spaces, tautness, traced curves and linkages."""

from .model import (
    TOL_FEAS,
    TOL_TENSE,
    Configuration,
    Cord,
    Network,
    NetworkError,
    Node,
    interpolate,
    is_configuration,
    path_length,
    slack_report,
    validate_network,
)
from .solver import (
    ConvergenceError,
    InfeasibleError,
    SolveOptions,
    find_configuration,
    find_tense_configuration,
    is_static,
    max_slack,
    taut_report,
)
from .taut import affine_relation, build_linear_model, check_mobility_laws, mobility
from .tracer import trace_boundary, trace_tense
from .firmness import firmness_estimate, max_displacement

__all__ = [
    "TOL_FEAS", "TOL_TENSE", "Configuration", "Cord", "Network", "NetworkError", "Node",
    "interpolate", "is_configuration", "path_length", "slack_report", "validate_network",
    "ConvergenceError", "InfeasibleError", "SolveOptions", "find_configuration",
    "find_tense_configuration", "is_static", "max_slack", "taut_report",
    "affine_relation", "build_linear_model", "check_mobility_laws", "mobility",
    "trace_boundary", "trace_tense", "firmness_estimate", "max_displacement",
]
