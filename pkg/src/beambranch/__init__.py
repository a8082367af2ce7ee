"""Positive solutions of nonlocal fourth-order hinged boundary value problems.

The library discretizes u'''' - p(x)u'' = lambda (a(x)u - u^rho(x) theta_u)
with hinged ends on a uniform grid, computes the principal eigenpair of the
weighted linear problem, checks the existence hypotheses, and traces the
global branch of positive solutions from the bifurcation point until it
crosses lambda = 1, certifying the resulting solution by its residual.
"""

from .continuation import (
    Branch,
    BranchPoint,
    PlaneConstraint,
    branch_start,
    fixed_point_residual,
    newton_correct,
    residual,
    solve_at_lambda,
    trace_branch,
)
from .nonlocal_term import NonlocalEvaluator, energy, signed_power, theta, theta_jacobian
from .operators import (
    InversePositivity,
    OperatorFactorization,
    apply_operator,
    assemble_operator,
    check_inverse_positivity,
    second_difference_eigenvalue,
    second_difference_matrix,
    solve,
)
from .problem import (
    CoefficientField,
    Grid,
    KernelField,
    ProblemSpec,
    build_problem,
    load_config,
    parse_config,
    sample_function,
    sample_kernel,
)
from .spectra import (
    EigenPair,
    HypothesisReport,
    check_hypotheses,
    higher_eigenpairs,
    hypothesis_flags,
    nodal_count,
    principal_eigenpair,
    rayleigh_quotient,
)

__version__ = "0.1.0"
