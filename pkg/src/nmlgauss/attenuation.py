"""Closed-form attenuation of bounded Gaussian classes.

The attenuation of ``n`` i.i.d. draws from the class ``(alpha, s_m, s_M)``
is the integral of the envelope over R^n.  Splitting R^n by where the
sample mean falls relative to the mean box gives three pieces:

* ``r1`` / ``r3``: mean clipped to an endpoint.  Each piece is 1/2 plus
  half of the variance term ``c_n log(s_M / s_m)``.
* ``r2``: mean free.  This piece is ``t1 + t2``, the dominant ``O(n)``
  term plus the mass where the variance clips.

Every coefficient is assembled in log space from ``log_gamma`` so large
``n`` neither overflows nor loses digits.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .core import GaussianClass
from .errors import DomainError
from .specfun import log_gamma, regularized_gamma_p

__all__ = [
    "Method",
    "AttenuationResult",
    "log_variance_coefficient",
    "log_mean_variance_coefficient",
    "compute_In",
    "atten_mean_only",
    "atten_variance_only",
    "atten_exact",
    "atten_approx",
    "exact_terms",
]

_LOG_2 = math.log(2.0)
_LOG_PI = math.log(math.pi)


class Method(str, enum.Enum):
    EXACT = "exact"
    APPROX = "approx"
    QUADRATURE = "quadrature"
    MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class AttenuationResult:
    """Attenuation ``A`` with its natural log; ``value`` is ``inf`` on overflow."""

    log_value: float
    method: Method
    regions: tuple[float, float, float] | None = None
    std_error: float | None = None

    @property
    def value(self) -> float:
        if self.log_value > 709.0:
            return math.inf
        return math.exp(self.log_value)

    def as_dict(self) -> dict:
        regions = None
        if self.regions is not None:
            regions = dict(zip(("r1", "r2", "r3"), self.regions))
        return {
            "attenuation": self.value,
            "log_attenuation": self.log_value,
            "method": self.method.value,
            "std_error": self.std_error,
            "regions": regions,
        }


def _check_n(n: int, minimum: int = 1) -> int:
    if isinstance(n, bool) or int(n) != n or n < minimum:
        raise DomainError(f"n must be an integer >= {minimum}, got {n!r}")
    return int(n)


def _log_sum(logs: list[float]) -> float:
    finite = [v for v in logs if v != -math.inf]
    if not finite:
        return -math.inf
    top = max(finite)
    return top + math.log(math.fsum(math.exp(v - top) for v in finite))


def log_variance_coefficient(n: int) -> float:
    """log c_n, where c_n = n^(n/2+1) e^(-n/2) / (2^(n/2) Gamma(n/2+1)).

    c_n multiplies log(s_M/s_m) and behaves like sqrt(n/pi) for large n.
    """
    n = _check_n(n)
    half = 0.5 * n
    return (half + 1.0) * math.log(n) - half - half * _LOG_2 - log_gamma(half + 1.0)


def log_mean_variance_coefficient(n: int) -> float:
    """log of n^(n/2) (n-1) e^(-n/2) / (2^(n/2) sqrt(pi) Gamma(n/2 + 1/2)).

    This multiplies ``alpha (1/s_m - 1/s_M)``; it is zero (log -inf) at n = 1.
    """
    n = _check_n(n)
    if n == 1:
        return -math.inf
    half = 0.5 * n
    return (
        half * math.log(n)
        + math.log(n - 1)
        - half
        - half * _LOG_2
        - 0.5 * _LOG_PI
        - log_gamma(half + 0.5)
    )


def compute_In(n: int) -> float:
    """Gaussian mass of ``z^T (I + 11^T) z <= n`` in n-1 dimensions.

    Under ``z ~ N(0, (I + 11^T)^-1)`` the quadratic form is chi-squared with
    n-1 degrees of freedom, so the mass is ``P((n-1)/2, n/2)``.  ``I_1 = 1``.
    """
    n = _check_n(n)
    if n == 1:
        return 1.0
    return regularized_gamma_p(0.5 * (n - 1), 0.5 * n)


def _check_sigma(sigma_min: float, sigma_max: float) -> None:
    if not (math.isfinite(sigma_min) and math.isfinite(sigma_max)):
        raise DomainError("sigma bounds must be finite")
    if not 0.0 < sigma_min <= sigma_max:
        raise DomainError(f"need 0 < sigma_min <= sigma_max, got {sigma_min}, {sigma_max}")


def atten_mean_only(n: int, alpha: float, sigma: float) -> AttenuationResult:
    """Known variance ``sigma^2``, mean anywhere in an interval of width ``alpha``."""
    n = _check_n(n)
    if not (math.isfinite(alpha) and alpha >= 0.0):
        raise DomainError(f"alpha must be finite and >= 0, got {alpha!r}")
    if not (math.isfinite(sigma) and sigma > 0.0):
        raise DomainError(f"sigma must be finite and > 0, got {sigma!r}")
    slope = alpha / sigma * math.sqrt(n / (2.0 * math.pi))
    return AttenuationResult(math.log1p(slope), Method.EXACT)


def atten_variance_only(n: int, sigma_min: float, sigma_max: float) -> AttenuationResult:
    """Known mean, standard deviation anywhere in ``[sigma_min, sigma_max]``."""
    n = _check_n(n)
    _check_sigma(sigma_min, sigma_max)
    log_ratio = math.log(sigma_max / sigma_min)
    if log_ratio == 0.0:
        return AttenuationResult(0.0, Method.EXACT)
    log_t3 = log_variance_coefficient(n) + math.log(log_ratio)
    return AttenuationResult(_log_sum([log_t3, 0.0]), Method.EXACT)


def exact_terms(n: int, cls: GaussianClass) -> tuple[float, float, float]:
    """Logs of the three non-constant terms ``(t1, t2, t3)`` of the exact value."""
    n = _check_n(n)
    a, lo, hi = cls.alpha, cls.sigma_min, cls.sigma_max
    if a == 0.0:
        log_t1 = log_t2 = -math.inf
    else:
        spread = 1.0 / lo - 1.0 / hi
        log_t1 = -math.inf
        if spread > 0.0:
            log_t1 = math.log(a) + log_mean_variance_coefficient(n) + math.log(spread)
        i_n = compute_In(n)
        log_t2 = math.log(a) + 0.5 * math.log(n / (2.0 * math.pi)) + math.log(
            i_n / lo + (1.0 - i_n) / hi
        )
    log_ratio = math.log(hi / lo)
    log_t3 = -math.inf
    if log_ratio > 0.0:
        log_t3 = log_variance_coefficient(n) + math.log(log_ratio)
    return log_t1, log_t2, log_t3


def _exp_or_inf(v: float) -> float:
    return math.inf if v > 709.0 else math.exp(v)


def atten_exact(n: int, cls: GaussianClass) -> AttenuationResult:
    """Exact attenuation, with the per-region split ``(r1, r2, r3)``."""
    log_t1, log_t2, log_t3 = exact_terms(n, cls)
    log_value = _log_sum([log_t1, log_t2, log_t3, 0.0])
    half_t3 = 0.5 * _exp_or_inf(log_t3)
    side = 0.5 + half_t3
    middle = _exp_or_inf(log_t1) + _exp_or_inf(log_t2)
    return AttenuationResult(log_value, Method.EXACT, regions=(side, middle, side))


def atten_approx(n: int, cls: GaussianClass) -> AttenuationResult:
    """Large-n form with the additive O(1) remainder dropped.

    The constant 1 of the exact value is part of that remainder, so e.g. a
    singleton class gives 0 here.  Never a substitute for ``atten_exact``.
    """
    n = _check_n(n, minimum=2)
    a, lo, hi = cls.alpha, cls.sigma_min, cls.sigma_max
    i_n = compute_In(n)
    t1 = a * math.sqrt(n * (n - 1.0)) / (math.pi * math.sqrt(2.0)) * (1.0 / lo - 1.0 / hi)
    t2 = a * math.sqrt(n / (2.0 * math.pi)) * (i_n / lo + (1.0 - i_n) / hi)
    t3 = math.sqrt(n / math.pi) * math.log(hi / lo)
    value = math.fsum((t1, t2, t3))
    log_value = math.log(value) if value > 0.0 else -math.inf
    return AttenuationResult(log_value, Method.APPROX)
