"""Brute-force reference computations used only by the tests."""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

LOG_2PI = math.log(2.0 * math.pi)


def loglik_grid(xs, mus, sigmas):
    """Log-likelihood of ``xs`` on the outer product of ``mus`` x ``sigmas``."""
    xs = np.asarray(xs, dtype=np.float64)
    n = xs.size
    mean = xs.mean()
    sse = float(((xs - mean) ** 2).sum())
    mu = mus[:, None]
    var = (sigmas ** 2)[None, :]
    spread = sse + n * (mean - mu) ** 2
    return -0.5 * n * (LOG_2PI + np.log(var)) - spread / (2.0 * var)


def grid_max_loglik(xs, alpha, sigma_min, sigma_max, points=200, rounds=6):
    """Maximize the likelihood over the parameter box by zooming grid search.

    Each round evaluates a ``points x points`` grid and shrinks the window to
    a few cells around the best node, clipped to the box.
    """
    mu_lo, mu_hi = -alpha / 2.0, alpha / 2.0
    s_lo, s_hi = sigma_min, sigma_max
    best = -math.inf
    best_at = (0.0, sigma_min)
    for _ in range(rounds):
        mus = np.linspace(mu_lo, mu_hi, points)
        sigmas = np.linspace(s_lo, s_hi, points)
        grid = loglik_grid(xs, mus, sigmas)
        i, j = np.unravel_index(int(np.argmax(grid)), grid.shape)
        if grid[i, j] > best:
            best = float(grid[i, j])
            best_at = (float(mus[i]), float(sigmas[j]))
        dmu = (mu_hi - mu_lo) / (points - 1)
        ds = (s_hi - s_lo) / (points - 1)
        mu_lo, mu_hi = max(-alpha / 2.0, mus[i] - 3 * dmu), min(alpha / 2.0, mus[i] + 3 * dmu)
        s_lo, s_hi = max(sigma_min, sigmas[j] - 3 * ds), min(sigma_max, sigmas[j] + 3 * ds)
    return best, best_at


def erf_by_quadrature(x: float) -> float:
    value, _ = integrate.quad(lambda t: math.exp(-t * t), 0.0, x, epsabs=1e-15, epsrel=1e-13)
    return 2.0 / math.sqrt(math.pi) * value


def in_by_quadrature_n2() -> float:
    """I_2 from its defining 1-d integral: (1/sqrt(pi)) int_{-1}^{1} e^{-z^2} dz."""
    value, _ = integrate.quad(lambda z: math.exp(-z * z), -1.0, 1.0, epsabs=1e-15, epsrel=1e-13)
    return value / math.sqrt(math.pi)


def gaussian_loglik(xs, mu, sigma):
    xs = np.asarray(xs, dtype=np.float64)
    return float(np.sum(-0.5 * (LOG_2PI + 2.0 * math.log(sigma)) - (xs - mu) ** 2 / (2.0 * sigma ** 2)))
