"""NumPy implementations of the batch kernels (fallback for ``_kernels``)."""

from __future__ import annotations

import numpy as np

LOG_2PI = float(np.log(2.0 * np.pi))


def row_stats(x):
    x = np.ascontiguousarray(x, dtype=np.float64)
    mean = x.mean(axis=1)
    dev = x - mean[:, None]
    sse = np.einsum("ij,ij->i", dev, dev)
    return mean, sse


def log_envelope_stats(n, mean, sse, alpha, sigma_min, sigma_max):
    mean = np.asarray(mean, dtype=np.float64)
    sse = np.asarray(sse, dtype=np.float64)
    half = 0.5 * alpha
    mu_hat = np.clip(mean, -half, half)
    spread = sse + n * (mean - mu_hat) ** 2
    var_hat = np.clip(spread / n, sigma_min * sigma_min, sigma_max * sigma_max)
    return -0.5 * n * (LOG_2PI + np.log(var_hat)) - spread / (2.0 * var_hat)


def log_envelope_rows(x, alpha, sigma_min, sigma_max):
    x = np.ascontiguousarray(x, dtype=np.float64)
    mean, sse = row_stats(x)
    return log_envelope_stats(x.shape[1], mean, sse, alpha, sigma_min, sigma_max)


def quad_form_rows(z):
    """sum(z_i^2) + (sum z_i)^2 per row, i.e. z^T (I + 11^T) z."""
    z = np.ascontiguousarray(z, dtype=np.float64)
    total = z.sum(axis=1)
    return np.einsum("ij,ij->i", z, z) + total * total
