"""Gaussian parameter boxes, sufficient statistics and the ML envelope.

The envelope of a class at a point is the largest density any member of
the class assigns to it.  For a box of means ``[-alpha/2, alpha/2]`` and
standard deviations ``[sigma_min, sigma_max]`` it is attained by the clipped
maximum-likelihood parameters, so everything here reduces to the two
sufficient statistics of the sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .errors import DomainError

__all__ = [
    "GaussianClass",
    "SufficientStats",
    "MlEstimate",
    "clamp",
    "ml_estimate",
    "log_envelope_seq",
    "envelope_1d",
    "log_gaussian_seq",
]

LOG_2PI = math.log(2.0 * math.pi)


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class GaussianClass:
    """i.i.d. Gaussians with mean in [-alpha/2, alpha/2], std in [sigma_min, sigma_max]."""

    alpha: float
    sigma_min: float
    sigma_max: float

    def __post_init__(self) -> None:
        alpha = _finite("alpha", self.alpha)
        lo = _finite("sigma_min", self.sigma_min)
        hi = _finite("sigma_max", self.sigma_max)
        if alpha < 0.0:
            raise DomainError(f"alpha must be >= 0, got {alpha}")
        if not 0.0 < lo <= hi:
            raise DomainError(f"need 0 < sigma_min <= sigma_max, got {lo}, {hi}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "sigma_min", lo)
        object.__setattr__(self, "sigma_max", hi)

    @classmethod
    def fixed_variance(cls, alpha: float, sigma: float = 1.0) -> "GaussianClass":
        return cls(alpha, sigma, sigma)

    @property
    def half_range(self) -> float:
        return 0.5 * self.alpha

    @property
    def is_singleton(self) -> bool:
        return self.alpha == 0.0 and self.sigma_min == self.sigma_max

    def contains(self, mu: float, sigma: float) -> bool:
        return abs(mu) <= self.half_range and self.sigma_min <= sigma <= self.sigma_max


@dataclass(frozen=True)
class SufficientStats:
    """Sample count, mean and centered sum of squares of a sequence."""

    n: int
    mean: float
    sse: float

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        mean = _finite("mean", self.mean)
        sse = _finite("sse", self.sse)
        if sse < 0.0:
            raise DomainError(f"sse must be >= 0, got {sse}")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "sse", sse)

    @classmethod
    def from_sequence(cls, xs: Iterable[float]) -> "SufficientStats":
        """Two passes of exactly rounded summation.

        ``math.fsum`` is correctly rounded, hence independent of the order
        of its terms, so any permutation of ``xs`` gives identical stats.
        """
        values = [_finite("observation", x) for x in xs]
        if not values:
            raise DomainError("cannot summarize an empty sequence")
        n = len(values)
        mean = math.fsum(values) / n
        sse = math.fsum((x - mean) ** 2 for x in values)
        if all(x == values[0] for x in values):
            mean, sse = values[0], 0.0
        return cls(n, mean, sse)


@dataclass(frozen=True)
class MlEstimate:
    mu_hat: float
    sigma_hat_sq: float
    log_phat: float

    @property
    def sigma_hat(self) -> float:
        return math.sqrt(self.sigma_hat_sq)

    @property
    def phat(self) -> float:
        """Envelope density in linear scale; underflows to 0 for long sequences."""
        return math.exp(self.log_phat)


def clamp(value: float, lo: float, hi: float) -> float:
    """Project ``value`` onto the closed interval ``[lo, hi]``."""
    if lo > hi:
        raise DomainError(f"clamp bounds out of order: lo={lo} > hi={hi}")
    if value <= lo:
        return lo
    if value >= hi:
        return hi
    return value


def log_gaussian_seq(stats: SufficientStats, mu: float, sigma: float) -> float:
    """Log-likelihood of an i.i.d. N(mu, sigma^2) sample summarized by ``stats``."""
    var = sigma * sigma
    spread = stats.sse + stats.n * (stats.mean - mu) ** 2
    return -0.5 * stats.n * (LOG_2PI + math.log(var)) - spread / (2.0 * var)


def ml_estimate(stats: SufficientStats, cls: GaussianClass) -> MlEstimate:
    """Maximum-likelihood parameters restricted to the class box.

    The mean is clipped first; the variance estimate is then taken about the
    clipped mean (parallel-axis identity) and clipped to the variance range.
    """
    half = cls.half_range
    mu_hat = clamp(stats.mean, -half, half)
    spread = stats.sse + stats.n * (stats.mean - mu_hat) ** 2
    var_hat = clamp(spread / stats.n, cls.sigma_min ** 2, cls.sigma_max ** 2)
    log_phat = -0.5 * stats.n * (LOG_2PI + math.log(var_hat)) - spread / (2.0 * var_hat)
    return MlEstimate(mu_hat, var_hat, log_phat)


def log_envelope_seq(stats: SufficientStats, cls: GaussianClass) -> float:
    return ml_estimate(stats, cls).log_phat


def envelope_1d(x: float, cls: GaussianClass) -> float:
    """Envelope density of a single observation, written branch by branch."""
    half = cls.half_range
    lo, hi = cls.sigma_min, cls.sigma_max
    d = abs(x) - half
    if d <= 0.0:
        return 1.0 / (math.sqrt(2.0 * math.pi) * lo)
    if d <= lo:
        return math.exp(-0.5 * (d / lo) ** 2) / (math.sqrt(2.0 * math.pi) * lo)
    if d <= hi:
        return 1.0 / (math.sqrt(2.0 * math.pi * math.e) * d)
    return math.exp(-0.5 * (d / hi) ** 2) / (math.sqrt(2.0 * math.pi) * hi)
