"""Worst-case optimal universal densities for bounded Gaussian classes.

The envelope ``p_hat(x) = max_p p(x)`` over i.i.d. Gaussians whose mean and
standard deviation lie in a box integrates to the class *attenuation* ``A``;
``q* = p_hat / A`` then satisfies ``q*(x) >= p(x) / A`` for every member.
"""

from .attenuation import (
    AttenuationResult,
    Method,
    atten_approx,
    atten_exact,
    atten_mean_only,
    atten_variance_only,
    compute_In,
)
from .core import (
    GaussianClass,
    MlEstimate,
    SufficientStats,
    clamp,
    envelope_1d,
    log_envelope_seq,
    ml_estimate,
)
from .errors import ConvergenceError, DomainError, IllConditionedProposalError
from .specfun import erf, log_gamma, regularized_gamma_p
from .universal import UniversalDensity, codelength_bits, log_q_star, regret
from .verify import (
    IntegralEstimate,
    TransformedSample,
    mc_atten,
    mc_In,
    quadrature_atten_1d,
    quadrature_atten_2d,
)

__version__ = "0.1.0"

__all__ = [
    "AttenuationResult",
    "ConvergenceError",
    "DomainError",
    "GaussianClass",
    "IllConditionedProposalError",
    "IntegralEstimate",
    "Method",
    "MlEstimate",
    "SufficientStats",
    "TransformedSample",
    "UniversalDensity",
    "atten_approx",
    "atten_exact",
    "atten_mean_only",
    "atten_variance_only",
    "clamp",
    "codelength_bits",
    "compute_In",
    "envelope_1d",
    "erf",
    "log_envelope_seq",
    "log_gamma",
    "log_q_star",
    "mc_In",
    "mc_atten",
    "ml_estimate",
    "quadrature_atten_1d",
    "quadrature_atten_2d",
    "regret",
    "regularized_gamma_p",
]
