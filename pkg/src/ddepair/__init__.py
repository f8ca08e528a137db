"""Euler-Cauchy difference differential equations and their adjoints.

The advanced equation ``u q'(u) = sum_j alpha_j q(u + v_j)`` has a canonical
solution q* (:mod:`ddepair.qstar`); the retarded equation
``(u p(u))' = -sum_j alpha_j p(u - v_j)`` has the normalised solution
p(u, a, b) (:mod:`ddepair.pfun`).  The two are tied together by an adjoint
identity (:mod:`ddepair.adjoint`) and by their asymptotic expansions
(:mod:`ddepair.asym`).
"""
from .adjoint import AdjointReport, UpqLimits, adjoint_constant, upq_limits
from .asym import AsymptoticSeries, p_series, q_series, q_series_inf, q_zero_asym, r_beta_poly
from .errors import (
    AccuracyError,
    CoefficientOverflowError,
    DdeError,
    DomainError,
    EinOverflowError,
    GammaPoleError,
    HorizonError,
    NormalizationError,
    RepresentationError,
    ValidationError,
)
from .oscillab import (
    OscillationReport,
    PiecewisePoly,
    backward_extend,
    forward_extend,
    oscillation_report,
    sign_changes,
)
from .params import DdeParams, Preset, make_params, params_from_dict, params_from_json, preset
from .pfun import (
    DiscontinuityReport,
    PiecewiseSolution,
    discontinuities,
    lift_a,
    p_laplace_check,
    p_solution,
    solve_p,
)
from .qstar import QstarValue, dde_residual, integral_form_constant, qstar, qstar_hankel, qstar_laplace, qstar_many
from .quadrature import DEFAULT_CONFIG, QuadratureConfig
from .special import EULER_GAMMA, ein, gamma_c, qn_coeffs, qn_values

__version__ = "0.1.0"
