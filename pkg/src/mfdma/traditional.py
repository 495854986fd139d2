"""
Generalized-Hurst route: F(q,s) -> h(q) -> tau(q) -> Legendre transform.
"""

from __future__ import annotations

import numpy as np
from scipy.special import logsumexp

from .core import (
    GridTooSparse,
    MFDMAError,
    QGrid,
    ScaleGrid,
    SpectrumResult,
    ZeroFluctuation,
    is_zero_q,
    log_slope_fit,
)


def _log_power_means(F, qs):
    """``ln`` of the q-th power means of ``F`` for every q in ``qs``."""
    qs = np.atleast_1d(np.asarray(qs, dtype=float))
    F = np.asarray(F, dtype=float).ravel()
    if F.size == 0 or np.any(F < 0) or not np.all(np.isfinite(F)):
        raise MFDMAError("fluctuations must be a nonempty finite nonnegative array")
    if not np.any(F > 0):
        raise ZeroFluctuation("all fluctuations are zero")
    if np.any(F == 0) and np.min(qs) <= 0:
        raise ZeroFluctuation(f"zero fluctuation with q={np.min(qs):g} <= 0")
    with np.errstate(divide="ignore"):
        lnF = np.log(F)
    zero = is_zero_q(qs)
    safe_q = np.where(zero, 1.0, qs)
    with np.errstate(invalid="ignore"):
        z = safe_q[:, None] * lnF[None, :]
    z[:, F == 0] = -np.inf
    out = (logsumexp(z, axis=1) - np.log(F.size)) / safe_q
    if np.any(zero):
        out[zero] = np.mean(lnF)
    return out


def fluctuation_function(F, q: float) -> float:
    """q-th order power mean of one scale's segment fluctuations.

    ``q = 0`` gives the geometric mean.

    >>> round(fluctuation_function([1.0, 2.0], 2.0), 4)
    1.5811
    """
    return float(np.exp(_log_power_means(F, [q])[0]))


def log_fluctuation_matrix(localF, qs) -> np.ndarray:
    """``ln F(q, s)`` with shape ``(len(qs), len(scales))``."""
    qs = np.asarray(qs, dtype=float)
    out = np.empty((qs.size, len(localF)))
    for j, F in enumerate(localF.values):
        try:
            out[:, j] = _log_power_means(F, qs)
        except ZeroFluctuation as exc:
            raise ZeroFluctuation(f"{exc} at scale s={localF.scales[j]}") from None
    return out


def hurst_exponents(log_F, scale_grid: ScaleGrid):
    """Slope of ``ln F(q,s)`` vs ``ln s`` for every q row.

    Returns the exponents and the list of per-q fits.
    """
    fits = [log_slope_fit(scale_grid.scales, row, scale_grid.fit_range)
            for row in np.atleast_2d(log_F)]
    return np.array([f.slope for f in fits]), fits


def mass_exponents_from_hurst(h, qs, D_f: int = 1) -> np.ndarray:
    return np.asarray(qs, dtype=float) * np.asarray(h, dtype=float) - D_f


def legendre_spectrum(tau, qs):
    """``alpha = d tau / dq`` by finite differences, ``f = q*alpha - tau``.

    Central differences in the interior (second order on uneven grids),
    one-sided at both ends.
    """
    tau = np.asarray(tau, dtype=float)
    qs = np.asarray(qs, dtype=float)
    if qs.size < 3:
        raise GridTooSparse("Legendre transform needs >= 3 q values")
    alpha = np.gradient(tau, qs)
    return alpha, qs * alpha - tau


def generalized_dimensions(tau, qs, alpha=None) -> np.ndarray:
    """``D_q = tau/(q-1)``; at q = 1 the limit ``alpha(1)`` is used when given."""
    tau = np.asarray(tau, dtype=float)
    qs = np.asarray(qs, dtype=float)
    at_one = is_zero_q(qs - 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        D = tau / (qs - 1.0)
    if np.any(at_one):
        D[at_one] = np.nan if alpha is None else np.asarray(alpha)[at_one]
    return D


def hurst_from_tau(tau, qs, D_f: int = 1) -> np.ndarray:
    """Back out ``h(q) = (tau + D_f)/q``; at q = 0 use the slope ``tau'(0)``."""
    tau = np.asarray(tau, dtype=float)
    qs = np.asarray(qs, dtype=float)
    zero = is_zero_q(qs)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = (tau + D_f) / qs
    if np.any(zero):
        if qs.size < 3:
            raise GridTooSparse("need neighbours of q=0 to differentiate tau")
        h[zero] = np.gradient(tau, qs)[zero]
    return h


def traditional_spectrum(localF, qgrid: QGrid, scale_grid: ScaleGrid,
                         log_F=None) -> SpectrumResult:
    """Run the generalized-Hurst estimator; ``log_F`` may be precomputed."""
    qs = qgrid.qs
    D_f = localF.dim
    if log_F is None:
        log_F = log_fluctuation_matrix(localF, qs)
    h, fits = hurst_exponents(log_F, scale_grid)
    tau = mass_exponents_from_hurst(h, qs, D_f)
    alpha, f = legendre_spectrum(tau, qs)
    D_q = generalized_dimensions(tau, qs, alpha)
    return SpectrumResult(qs, tau, alpha, f, D_q, h, D_f, "traditional",
                          fits={"h": fits}, curves={"log_F": log_F})
