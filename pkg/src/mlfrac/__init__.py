"""Fractional derivatives and integrals with a nonsingular Mittag-Leffler
kernel, their verification suite, and the worked variational examples."""

from .errors import (
    ConvergenceError,
    DegenerateOrder,
    DepthExceeded,
    DivergenceError,
    DomainError,
    ExprSyntaxError,
    MlfracError,
    NonFiniteIntegrand,
    PoleError,
    SingularityError,
    UnknownIdentifier,
)
from .expr import differentiate, evaluate, parse_expr, to_real_function, to_string
from .identities import (
    IdentityReport,
    ml_eigen_closed,
    run_default_suite,
    verify_caputo_ibp,
    verify_caputo_rl_relation,
    verify_convolution,
    verify_diff_formula,
    verify_ibp_derivatives,
    verify_ibp_integrals,
    verify_inverse_and_fundamental,
    zero_mode,
)
from .operators import (
    FracOrder,
    GridFunction,
    Side,
    ab_integral,
    abc_derivative,
    abr_derivative,
    abr_derivative_kernel_diff,
    gen_ml_integral,
    q_reflect,
    rl_derivative,
    rl_integral,
)
from .quadrature import QuadConfig, RealFunction, adaptive_gl, central_diff, rl_weighted_quad
from .special import MLParams, SeriesResult, gamma_fn, ml_eval, pochhammer
from .variational import (
    LagrangianEval,
    PicardResult,
    SolverConfig,
    el_residual,
    fractional_velocity,
    natural_bc,
    residual_grid,
    solve_free_particle,
    solve_quadratic_potential,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DegenerateOrder",
    "DepthExceeded",
    "DivergenceError",
    "DomainError",
    "ExprSyntaxError",
    "FracOrder",
    "GridFunction",
    "IdentityReport",
    "LagrangianEval",
    "MLParams",
    "MlfracError",
    "NonFiniteIntegrand",
    "PicardResult",
    "PoleError",
    "QuadConfig",
    "RealFunction",
    "SeriesResult",
    "Side",
    "SingularityError",
    "SolverConfig",
    "UnknownIdentifier",
    "ab_integral",
    "abc_derivative",
    "abr_derivative",
    "abr_derivative_kernel_diff",
    "adaptive_gl",
    "central_diff",
    "differentiate",
    "el_residual",
    "evaluate",
    "fractional_velocity",
    "gamma_fn",
    "gen_ml_integral",
    "ml_eigen_closed",
    "ml_eval",
    "natural_bc",
    "parse_expr",
    "pochhammer",
    "q_reflect",
    "residual_grid",
    "rl_derivative",
    "rl_integral",
    "rl_weighted_quad",
    "run_default_suite",
    "solve_free_particle",
    "solve_quadratic_potential",
    "to_real_function",
    "to_string",
    "verify_caputo_ibp",
    "verify_caputo_rl_relation",
    "verify_convolution",
    "verify_diff_formula",
    "verify_ibp_derivatives",
    "verify_ibp_integrals",
    "verify_inverse_and_fundamental",
    "zero_mode",
]
