"""The normalized envelope ``q* = p_hat / A`` and what it costs to code with it."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .attenuation import atten_exact
from .core import GaussianClass, SufficientStats, log_envelope_seq, log_gaussian_seq
from .errors import DomainError

__all__ = ["UniversalDensity", "log_q_star", "regret", "codelength_bits"]

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class UniversalDensity:
    """Minimax universal density for length-``n`` sequences from ``cls``.

    ``log_atten`` is always the exact attenuation; the large-n approximation
    can undershoot it and would break the ``regret <= log A`` guarantee.
    """

    cls: GaussianClass
    n: int
    log_atten: float

    def __post_init__(self) -> None:
        if self.log_atten < 0.0:
            raise DomainError(f"log attenuation must be >= 0, got {self.log_atten}")

    @classmethod
    def for_class(cls, gaussians: GaussianClass, n: int) -> "UniversalDensity":
        return cls(gaussians, int(n), atten_exact(n, gaussians).log_value)

    @property
    def attenuation(self) -> float:
        return math.exp(self.log_atten)


def _check_length(u: UniversalDensity, stats: SufficientStats) -> None:
    if stats.n != u.n:
        raise DomainError(f"sequence length {stats.n} does not match density length {u.n}")


def log_q_star(u: UniversalDensity, stats: SufficientStats) -> float:
    _check_length(u, stats)
    return log_envelope_seq(stats, u.cls) - u.log_atten


def regret(u: UniversalDensity, mu: float, sigma: float, stats: SufficientStats) -> float:
    """``log p_{mu,sigma}(x) - log q*(x)``; at most ``log A`` for in-class parameters."""
    if not u.cls.contains(mu, sigma):
        raise DomainError(f"(mu={mu}, sigma={sigma}) lies outside the class box")
    return log_gaussian_seq(stats, mu, sigma) - log_q_star(u, stats)


def codelength_bits(u: UniversalDensity, stats: SufficientStats) -> float:
    """Differential code length ``-log2 q*(x)`` in bits."""
    return -log_q_star(u, stats) / _LN2
