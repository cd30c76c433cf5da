"""Numerical oracles for the attenuation closed forms.

Two independent routes to the integral of the envelope:

* adaptive Gauss-Kronrod quadrature for sequences of length 1 and 2, and
* stratified importance sampling in (mean, deviation) coordinates for any
  length ``n >= 2``.

Neither route uses the closed-form terms to compute its value.  The Monte
Carlo sampler only borrows the closed-form region masses to decide how many
samples each stratum gets, which affects the variance but not the mean.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import solve_triangular

from . import kernels
from .attenuation import atten_exact
from .core import GaussianClass, envelope_1d
from .errors import ConvergenceError, DomainError, IllConditionedProposalError
from .quadrature import integrate_pieces

__all__ = [
    "IntegralEstimate",
    "TransformedSample",
    "kinv_matrix",
    "cholesky_factor",
    "jacobian_determinant",
    "quadrature_atten_1d",
    "quadrature_atten_2d",
    "mc_atten",
    "mc_In",
    "TAIL_SIGMAS",
    "CHUNK_SIZE",
]

TAIL_SIGMAS = 12.0
CHUNK_SIZE = 1 << 14
_MIN_SAMPLES = 10_000
_DEFENSIVE_WEIGHT = 0.1
_DEFENSIVE_SCALE = 1.5
_MIN_STRATUM_SHARE = 0.1
_ESS_FLOOR = 0.01


@dataclass(frozen=True)
class IntegralEstimate:
    """Value of an integral with its uncertainty.

    ``std_error`` is zero for quadrature, where ``error`` holds the achieved
    error estimate instead.  ``regions`` splits the value by where the
    sample mean falls: below, inside, above the mean range.
    """

    value: float
    std_error: float = 0.0
    samples: int = 0
    seed: int | None = None
    regions: tuple[float, float, float] | None = None
    region_std_errors: tuple[float, float, float] | None = None
    error: float = 0.0

    @property
    def deterministic(self) -> bool:
        return self.std_error == 0.0 and self.samples == 0


@dataclass(frozen=True)
class TransformedSample:
    """A sequence in (mean, first n-1 deviations) coordinates."""

    y: float
    z: np.ndarray

    @classmethod
    def from_x(cls, x) -> "TransformedSample":
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 1 or x.size < 2:
            raise DomainError("need a sequence of length >= 2")
        y = float(x.mean())
        return cls(y, x[:-1] - y)

    def to_x(self) -> np.ndarray:
        z = np.asarray(self.z, dtype=np.float64)
        return np.concatenate([self.y + z, [self.y - z.sum()]])


def _transform_rows(y: np.ndarray, z: np.ndarray) -> np.ndarray:
    x = np.empty((z.shape[0], z.shape[1] + 1))
    x[:, :-1] = y[:, None] + z
    x[:, -1] = y - z.sum(axis=1)
    return x


def kinv_matrix(n: int) -> np.ndarray:
    """The (n-1) x (n-1) matrix I + 11^T of the deviation quadratic form."""
    if n < 2:
        raise DomainError("kinv_matrix needs n >= 2")
    return np.eye(n - 1) + np.ones((n - 1, n - 1))


def cholesky_factor(n: int) -> np.ndarray:
    """Upper-triangular C with C^T C = I + 11^T."""
    return np.linalg.cholesky(kinv_matrix(n)).T


def jacobian_determinant(y: float, z, step: float = 1e-4) -> float:
    """|det d x / d(y, z)| by central differences of the inverse map."""
    z = np.asarray(z, dtype=np.float64)
    point = np.concatenate([[y], z])
    dim = point.size
    jac = np.empty((dim, dim))
    for k in range(dim):
        e = np.zeros(dim)
        e[k] = step
        plus = TransformedSample(point[0] + e[0], point[1:] + e[1:]).to_x()
        minus = TransformedSample(point[0] - e[0], point[1:] - e[1:]).to_x()
        jac[:, k] = (plus - minus) / (2.0 * step)
    return abs(float(np.linalg.det(jac)))


def _check_rel_tol(rel_tol: float, lo: float, hi: float) -> None:
    if not lo < rel_tol < hi:
        raise DomainError(f"rel_tol must lie in ({lo:g}, {hi:g}), got {rel_tol!r}")


# -- quadrature ---------------------------------------------------------------


def _upper_tail(t: float) -> float:
    """P(N(0,1) > t)."""
    return 0.5 * math.erfc(t / math.sqrt(2.0))


def quadrature_atten_1d(cls: GaussianClass, rel_tol: float = 1e-10) -> IntegralEstimate:
    """Integrate the single-observation envelope over the real line."""
    _check_rel_tol(rel_tol, 1e-12, 1e-2)
    half, lo, hi = cls.half_range, cls.sigma_min, cls.sigma_max
    cutoff = half + TAIL_SIGMAS * hi
    inner = [half, half + lo, half + hi]
    points = [-cutoff] + [-p for p in reversed(inner)] + inner + [cutoff]

    def f(xs: np.ndarray) -> np.ndarray:
        return np.array([envelope_1d(x, cls) for x in xs])

    below, err_below = integrate_pieces(f, [p for p in points if p <= -half], rel_tol)
    middle, err_middle = integrate_pieces(f, [-half, half], rel_tol)
    above, err_above = integrate_pieces(f, [p for p in points if p >= half], rel_tol)
    # beyond the cutoff the envelope is the sigma_max Gaussian at the mean edge
    tail = _upper_tail(TAIL_SIGMAS)
    below += tail
    above += tail
    total = below + middle + above
    error = err_below + err_middle + err_above
    if error > rel_tol * total:
        raise ConvergenceError(f"1-d quadrature error {error:.3e} above tolerance")
    return IntegralEstimate(total, regions=(below, middle, above), error=error)


def quadrature_atten_2d(cls: GaussianClass, rel_tol: float = 1e-8) -> IntegralEstimate:
    """Integrate the length-2 envelope in (y, z) coordinates.

    Here ``y = (x1 + x2)/2`` and ``z = x1 - y``, so ``dx1 dx2 = 2 dy dz`` and
    the centered sum of squares is ``2 z^2``.
    """
    _check_rel_tol(rel_tol, 1e-10, 1e-2)
    half, lo, hi = cls.half_range, cls.sigma_min, cls.sigma_max
    box = half + TAIL_SIGMAS * hi
    inner_tol = 0.1 * rel_tol

    def log_env(y: float, z: np.ndarray) -> np.ndarray:
        means = np.full(z.shape, y)
        return kernels.log_envelope_stats(2, means, 2.0 * z * z, cls.alpha, lo, hi)

    def slice_mass(y: float) -> float:
        # z-breakpoints where the clipped variance hits sigma_min / sigma_max
        d = max(abs(y) - half, 0.0)
        cuts = [0.0, box]
        for s in (lo, hi):
            if s > d:
                cuts.append(math.sqrt(s * s - d * d))
        value, _ = integrate_pieces(
            lambda z: np.exp(log_env(y, z)), [c for c in cuts if c <= box], inner_tol
        )
        return 4.0 * value  # Jacobian 2, and the integrand is even in z

    def outer(ys: np.ndarray) -> np.ndarray:
        return np.array([slice_mass(float(y)) for y in ys])

    right = [half, half + lo, half + hi, box]
    left = [-p for p in reversed(right)]
    below, e1 = integrate_pieces(outer, left, rel_tol)
    middle, e2 = integrate_pieces(outer, [-half, half], rel_tol) if half > 0 else (0.0, 0.0)
    above, e3 = integrate_pieces(outer, right, rel_tol)
    # |y| beyond the box: the variance clips at sigma_max, so the envelope is
    # a pair of i.i.d. N(+-alpha/2, sigma_max^2) there and y has std hi/sqrt(2)
    tail = _upper_tail(TAIL_SIGMAS * math.sqrt(2.0))
    below += tail
    above += tail
    total = below + middle + above
    error = e1 + e2 + e3
    if error > rel_tol * total:
        raise ConvergenceError(f"2-d quadrature error {error:.3e} above tolerance")
    return IntegralEstimate(total, regions=(below, middle, above), error=error)


# -- Monte Carlo --------------------------------------------------------------


def _log_sphere_area(k: int) -> float:
    """log of the surface area of the unit sphere in R^k."""
    return math.log(2.0) + 0.5 * k * math.log(math.pi) - math.lgamma(0.5 * k)


@dataclass(frozen=True)
class _RadialMixture:
    """Mixture law for the radius of a point in R^k.

    Components are scaled chi_k laws (Gaussian shells) plus an optional
    power-law shell ``r^-power`` on ``[r_lo, r_hi]``.
    """

    k: int
    scales: tuple[float, ...]
    scale_weights: tuple[float, ...]
    shell: tuple[float, float, int] | None
    shell_weight: float

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        weights = np.array(self.scale_weights + (self.shell_weight,))
        choice = rng.choice(weights.size, size=size, p=weights / weights.sum())
        radius = np.empty(size)
        for idx, scale in enumerate(self.scales):
            mask = choice == idx
            radius[mask] = scale * np.sqrt(rng.chisquare(self.k, size=int(mask.sum())))
        mask = choice == len(self.scales)
        if self.shell is not None and mask.any():
            r_lo, r_hi, power = self.shell
            u = rng.random(int(mask.sum()))
            if power == 1:
                radius[mask] = r_lo * (r_hi / r_lo) ** u
            else:
                radius[mask] = 1.0 / (1.0 / r_lo - u * (1.0 / r_lo - 1.0 / r_hi))
        return radius

    def log_pdf(self, r: np.ndarray) -> np.ndarray:
        k = self.k
        logs = []
        log_r = np.log(r)
        chi_norm = (0.5 * k - 1.0) * math.log(2.0) + math.lgamma(0.5 * k)
        for scale, weight in zip(self.scales, self.scale_weights):
            logs.append(
                math.log(weight)
                + (k - 1) * log_r
                - 0.5 * (r / scale) ** 2
                - k * math.log(scale)
                - chi_norm
            )
        if self.shell is not None and self.shell_weight > 0.0:
            r_lo, r_hi, power = self.shell
            if power == 1:
                norm = math.log(r_hi / r_lo)
            else:
                norm = 1.0 / r_lo - 1.0 / r_hi
            inside = (r >= r_lo) & (r <= r_hi)
            shell_log = np.where(inside, -power * log_r, -np.inf)
            logs.append(math.log(self.shell_weight) - math.log(norm) + shell_log)
        return np.logaddexp.reduce(np.vstack(logs), axis=0)


def _radial_mixture(k: int, n: int, cls: GaussianClass) -> _RadialMixture:
    lo, hi = cls.sigma_min, cls.sigma_max
    # the envelope's radial profile in R^k is r^(k-1) * r^-n inside the shell
    power = n + 1 - k
    if lo < hi:
        share = (1.0 - _DEFENSIVE_WEIGHT) / 3.0
        scales = (lo, hi, _DEFENSIVE_SCALE * hi)
        weights = (share, share, _DEFENSIVE_WEIGHT)
        shell = (math.sqrt(n) * lo, math.sqrt(n) * hi, power)
        return _RadialMixture(k, scales, weights, shell, share)
    scales = (lo, _DEFENSIVE_SCALE * hi)
    weights = (1.0 - _DEFENSIVE_WEIGHT, _DEFENSIVE_WEIGHT)
    return _RadialMixture(k, scales, weights, None, 0.0)


def _unit_directions(rng: np.random.Generator, size: int, k: int) -> np.ndarray:
    g = rng.standard_normal((size, k))
    return g / np.linalg.norm(g, axis=1)[:, None]


def _side_chunk(rng, size, n, cls, mixture, sign):
    """Stratum where the sample mean lies beyond ``sign * alpha/2``."""
    radius = mixture.sample(rng, size)
    u = _unit_directions(rng, size, n) * radius[:, None]
    # fold onto the half-space sign * sum(u) >= 0
    flip = sign * u.sum(axis=1) < 0.0
    u[flip] *= -1.0
    x = u + sign * cls.half_range
    log_f = kernels.log_envelope_rows(x, cls.alpha, cls.sigma_min, cls.sigma_max)
    log_q = math.log(2.0) + mixture.log_pdf(radius) - _log_sphere_area(n) - (n - 1) * np.log(radius)
    return np.exp(log_f - log_q)


def _middle_chunk(rng, size, n, cls, mixture, chol):
    """Stratum where the sample mean lies inside the mean range."""
    k = n - 1
    y = (rng.random(size) - 0.5) * cls.alpha
    radius = mixture.sample(rng, size)
    w = _unit_directions(rng, size, k) * radius[:, None]
    z = solve_triangular(chol, w.T, lower=False).T
    x = _transform_rows(y, z)
    log_f = kernels.log_envelope_rows(x, cls.alpha, cls.sigma_min, cls.sigma_max)
    log_q_w = mixture.log_pdf(radius) - _log_sphere_area(k) - (k - 1) * np.log(radius)
    # dx = n dy dz and dz = dw / sqrt(n); y is uniform with density 1/alpha
    log_jac = 0.5 * math.log(n) + math.log(cls.alpha)
    return np.exp(log_f - log_q_w + log_jac)


def _chunk_counts(total: int) -> list[int]:
    full, rest = divmod(total, CHUNK_SIZE)
    return [CHUNK_SIZE] * full + ([rest] if rest else [])


def _run_chunks(job: Callable[[int, int], np.ndarray], counts: list[int], threads: int) -> np.ndarray:
    if not counts:
        return np.empty(0)
    indices = range(len(counts))
    if threads > 1 and len(counts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda i: job(i, counts[i]), indices))
    else:
        parts = [job(i, counts[i]) for i in indices]
    return np.concatenate(parts)


def _stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < 2 ** 64:
        raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def _allocate(samples: int, masses: tuple[float, float, float], active: tuple[bool, bool, bool]) -> list[int]:
    live = [m if a else 0.0 for m, a in zip(masses, active)]
    total = sum(live)
    n_live = sum(active)
    shares = []
    for m, a in zip(live, active):
        if not a:
            shares.append(0.0)
            continue
        shares.append(_MIN_STRATUM_SHARE + (1.0 - _MIN_STRATUM_SHARE * n_live) * m / total)
    counts = [int(samples * s) for s in shares]
    # leftovers go to the first live stratum with the largest share
    best = max(range(3), key=lambda i: shares[i])
    counts[best] += samples - sum(counts)
    return counts


def mc_atten(
    n: int,
    cls: GaussianClass,
    samples: int = 1_000_000,
    seed: int = 0,
    threads: int = 1,
) -> IntegralEstimate:
    """Stratified importance-sampling estimate of the length-``n`` attenuation.

    Strata follow the sample mean: below, inside and above the mean range.
    The side strata draw ``u = x -+ alpha/2`` from a radially symmetric law
    folded onto the right half-space; the middle stratum draws the mean
    uniformly and the deviations as ``z = C^-1 w`` with ``C^T C = I + 11^T``
    and ``w`` radially symmetric in R^(n-1).  Radii come from a mixture of
    Gaussian shells at ``sigma_min``, ``sigma_max`` and a wider defensive
    scale, plus a power-law shell matching the region where the variance
    estimate is unclipped.

    Results depend only on ``(n, cls, samples, seed)``: chunks of fixed size
    own independent streams keyed by (stratum, chunk index), so ``threads``
    never changes the value.
    """
    if isinstance(n, bool) or int(n) != n or n < 2:
        raise DomainError(f"mc_atten needs an integer n >= 2, got {n!r}")
    n = int(n)
    if samples < _MIN_SAMPLES:
        raise DomainError(f"need at least {_MIN_SAMPLES} samples, got {samples}")
    seed = _check_seed(seed)
    masses = atten_exact(n, cls).regions
    active = (True, cls.alpha > 0.0, True)
    counts = _allocate(int(samples), masses, active)

    side_mix = _radial_mixture(n, n, cls)
    mid_mix = _radial_mixture(n - 1, n, cls)
    chol = cholesky_factor(n)

    def stratum_job(stratum: int) -> Callable[[int, int], np.ndarray]:
        def job(chunk: int, size: int) -> np.ndarray:
            rng = _stream(seed, stratum, chunk)
            if stratum == 1:
                return _middle_chunk(rng, size, n, cls, mid_mix, chol)
            return _side_chunk(rng, size, n, cls, side_mix, -1.0 if stratum == 0 else 1.0)
        return job

    values, errors = [], []
    for stratum in range(3):
        if counts[stratum] == 0:
            values.append(0.0)
            errors.append(0.0)
            continue
        weights = _run_chunks(stratum_job(stratum), _chunk_counts(counts[stratum]), threads)
        ess = weights.sum() ** 2 / np.dot(weights, weights)
        if ess < _ESS_FLOOR * weights.size:
            raise IllConditionedProposalError(
                f"effective sample size {ess:.0f} of {weights.size} in stratum {stratum}"
            )
        values.append(float(weights.mean()))
        errors.append(float(weights.std(ddof=1) / math.sqrt(weights.size)))

    value = math.fsum(values)
    std_error = math.sqrt(math.fsum(e * e for e in errors))
    return IntegralEstimate(
        value,
        std_error=std_error,
        samples=int(samples),
        seed=seed,
        regions=tuple(values),
        region_std_errors=tuple(errors),
    )


def mc_In(n: int, samples: int = 1_000_000, seed: int = 0, threads: int = 1) -> IntegralEstimate:
    """Monte Carlo mass of ``sum z_i^2 + (sum z_i)^2 <= n`` under its Gaussian.

    Draws ``w ~ N(0, I)`` in R^(n-1), maps it through ``z = C^-1 w`` and
    evaluates the quadratic form on ``z`` directly.
    """
    if isinstance(n, bool) or int(n) != n or n < 2:
        raise DomainError(f"mc_In needs an integer n >= 2, got {n!r}")
    n = int(n)
    if samples < _MIN_SAMPLES:
        raise DomainError(f"need at least {_MIN_SAMPLES} samples, got {samples}")
    seed = _check_seed(seed)
    chol = cholesky_factor(n)

    def job(chunk: int, size: int) -> np.ndarray:
        rng = _stream(seed, chunk)
        w = rng.standard_normal((size, n - 1))
        z = solve_triangular(chol, w.T, lower=False).T
        return (kernels.quad_form_rows(z) <= n).astype(np.float64)

    hits = _run_chunks(job, _chunk_counts(int(samples)), threads)
    p = float(hits.mean())
    return IntegralEstimate(
        p, std_error=math.sqrt(p * (1.0 - p) / hits.size), samples=int(samples), seed=seed
    )
