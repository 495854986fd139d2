"""
Synthetic test signals with known scaling and their closed-form exponents.
"""

from __future__ import annotations

import numpy as np

from .core import MFDMAError, is_zero_q

LN2 = np.log(2.0)


def pmodel_1d(p1: float, k: int) -> np.ndarray:
    """Deterministic binomial cascade of length ``2**k`` with unit total mass.

    At every generation the left half of each interval receives the fraction
    ``p1`` of its parent's measure and the right half ``1 - p1``.
    """
    if not 0.0 < p1 < 1.0:
        raise MFDMAError("p1 must lie strictly between 0 and 1")
    if k < 1:
        raise MFDMAError("cascade depth must be >= 1")
    weights = np.array([p1, 1.0 - p1])
    m = np.ones(1)
    for _ in range(k):
        m = np.outer(m, weights).ravel()
    return m


def pmodel_2d(p, k: int) -> np.ndarray:
    """Four-quadrant cascade on a ``2**k x 2**k`` grid.

    ``p = (p1, p2, p3, p4)`` go to the NW, NE, SW and SE sub-squares.
    """
    p = np.asarray(p, dtype=float)
    if p.shape != (4,) or np.any(p <= 0):
        raise MFDMAError("need four positive proportions")
    if abs(p.sum() - 1.0) > 1e-12:
        raise MFDMAError(f"proportions must sum to 1, got {p.sum()!r}")
    if k < 1:
        raise MFDMAError("cascade depth must be >= 1")
    tile = p.reshape(2, 2)
    m = np.ones((1, 1))
    for _ in range(k):
        m = np.kron(m, tile)
    return m


def fgn_autocovariance(H: float, lags) -> np.ndarray:
    """Autocovariance of unit-variance fractional Gaussian noise."""
    k = np.abs(np.asarray(lags, dtype=float))
    return 0.5 * ((k + 1) ** (2 * H) - 2 * k ** (2 * H) + np.abs(k - 1) ** (2 * H))


def fbm(H: float, n: int, seed=None, sigma: float = 1.0) -> np.ndarray:
    """Increments of fractional Brownian motion (fractional Gaussian noise).

    Exact synthesis by circulant embedding of the fGn covariance
    (Davies-Harte). The cumulative sum of the output is an fBm path, so the
    moving-average analysis of the returned series recovers ``H``.

    Parameters
    ----------
    H : float
        Hurst exponent in (0, 1).
    n : int
        Number of increments.
    seed : int or numpy.random.Generator, optional
    sigma : float
        Standard deviation of each increment.
    """
    if not 0.0 < H < 1.0:
        raise MFDMAError("Hurst exponent must lie in (0, 1)")
    if n < 2:
        raise MFDMAError("need at least two increments")
    rng = np.random.default_rng(seed)
    row = fgn_autocovariance(H, np.arange(n + 1))
    circ = np.concatenate((row, row[-2:0:-1]))
    m = circ.size
    lam = np.fft.fft(circ).real
    if np.min(lam) < -1e-10 * np.max(lam):
        raise MFDMAError("circulant embedding is not nonnegative definite")
    lam = np.clip(lam, 0.0, None)
    w = np.sqrt(lam / m) * (rng.standard_normal(m) + 1j * rng.standard_normal(m))
    return sigma * np.fft.fft(w).real[:n]


def analytic_tau(p, q) -> np.ndarray:
    """Mass exponents of a dyadic cascade with branch proportions ``p``.

    ``tau(q) = -log2(sum_i p_i**q)``; two proportions give the 1D p-model,
    four give the 2D one.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return -np.log(np.sum(p[:, None] ** np.ravel(q)[None, :], axis=0)).reshape(q.shape) / LN2


def analytic_alpha(p, q) -> np.ndarray:
    """Singularity strength ``alpha(q) = d tau/dq`` of the same cascade."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    pq = p[:, None] ** np.ravel(q)[None, :]
    num = np.sum(pq * np.log(p)[:, None], axis=0)
    return (-num / (np.sum(pq, axis=0) * LN2)).reshape(q.shape)


def analytic_tau_1d(p1: float, q):
    return analytic_tau([p1, 1.0 - p1], q)


def analytic_alpha_1d(p1: float, q):
    return analytic_alpha([p1, 1.0 - p1], q)


def analytic_tau_2d(p, q):
    return analytic_tau(p, q)


def analytic_alpha_2d(p, q):
    # symmetric sum over all four proportions
    return analytic_alpha(p, q)


def analytic_spectrum(tau_fn, alpha_fn, q):
    """``(D_q, f)`` from closed-form tau and alpha; ``D_1 = alpha(1)``."""
    q = np.asarray(q, dtype=float)
    tau = np.asarray(tau_fn(q), dtype=float)
    alpha = np.asarray(alpha_fn(q), dtype=float)
    at_one = is_zero_q(q - 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        D = np.where(at_one, alpha, tau / np.where(at_one, 1.0, q - 1.0))
    return D, q * alpha - tau


def cascade_oracle(p, q) -> dict:
    """All closed-form curves for a cascade, keyed like a spectrum table."""
    p = np.asarray(p, dtype=float)
    tau_fn = lambda qq: analytic_tau(p, qq)  # noqa: E731
    alpha_fn = lambda qq: analytic_alpha(p, qq)  # noqa: E731
    D, f = analytic_spectrum(tau_fn, alpha_fn, q)
    return {"tau": tau_fn(q), "alpha": alpha_fn(q), "D_q": D, "f_alpha": f}
