"""
Direct determination of tau(q), alpha(q) and f(alpha) from a canonical measure.

For each scale the segment fluctuations are turned into the family of
probability measures ``mu(q,s,v) = F_v^q / sum_u F_u^q``. Three ordinates are
then regressed against ``ln s``:

* ``ln chi(q,s)``             -> tau(q)
* ``A(q,s) = sum mu ln F_v``  -> alpha(q)
* ``B(q,s) = sum mu ln mu``   -> f(alpha(q))

Since ``q*A - ln chi = B`` holds scale by scale, the three slopes satisfy the
Legendre relation exactly when they share a fit range.
"""

from __future__ import annotations

import numpy as np

from .core import (
    MFDMAError,
    QGrid,
    ScaleGrid,
    SpectrumResult,
    ZeroFluctuation,
    log_slope_fit,
    semilog_fit,
)
from .traditional import generalized_dimensions, hurst_from_tau


def _check(F, qs):
    F = np.asarray(F, dtype=float).ravel()
    if F.size == 0 or np.any(F < 0) or not np.all(np.isfinite(F)):
        raise MFDMAError("fluctuations must be a nonempty finite nonnegative array")
    if not np.any(F > 0):
        raise ZeroFluctuation("all fluctuations are zero")
    if np.any(F == 0) and np.min(qs) <= 0:
        raise ZeroFluctuation(f"zero fluctuation with q={np.min(qs):g} <= 0")
    return F


def _moments(F, qs):
    """Shifted log-moments for one scale.

    Returns ``(ln chi, mu, lnF)`` with ``mu`` of shape ``(len(qs), len(F))``.
    """
    qs = np.atleast_1d(np.asarray(qs, dtype=float))
    F = _check(F, qs)
    with np.errstate(divide="ignore"):
        lnF = np.log(F)
    # q*lnF where F == 0 and q > 0 is -inf, which exponentiates to weight 0
    with np.errstate(invalid="ignore"):
        z = qs[:, None] * lnF[None, :]
    z[:, F == 0] = -np.inf
    shift = np.max(z, axis=1, keepdims=True)
    w = np.exp(z - shift)
    total = np.sum(w, axis=1, keepdims=True)
    log_chi = (shift + np.log(total)).ravel()
    return log_chi, w / total, lnF


def canonical_measure(F, q: float) -> np.ndarray:
    """Normalized q-th powers of the segment fluctuations at one scale.

    >>> canonical_measure([1.0, 2.0], 2.0)
    array([0.2, 0.8])
    """
    _, mu, _ = _moments(F, [q])
    return mu[0]


def log_partition_function(F, q: float) -> float:
    return float(_moments(F, [q])[0][0])


def partition_function(F, q: float) -> float:
    """``chi(q,s) = sum_v F_v^q``. May overflow for extreme q; see
    :func:`log_partition_function`."""
    return float(np.exp(log_partition_function(F, q)))


def _xlogy(mu, log_values):
    # 0 * ln 0 := 0
    out = np.zeros_like(mu)
    pos = mu > 0
    out[pos] = mu[pos] * np.broadcast_to(log_values, mu.shape)[pos]
    return out.sum(axis=1)


def canonical_sums(localF, qs):
    """Regression ordinates on the full ``q x s`` lattice.

    Returns a dict with ``log_chi``, ``A`` and ``B`` arrays, each of shape
    ``(len(qs), len(scales))``.
    """
    qs = np.asarray(qs, dtype=float)
    shape = (qs.size, len(localF))
    log_chi, A, B = np.empty(shape), np.empty(shape), np.empty(shape)
    for j, F in enumerate(localF.values):
        try:
            lc, mu, lnF = _moments(F, qs)
        except ZeroFluctuation as exc:
            raise ZeroFluctuation(f"{exc} at scale s={localF.scales[j]}") from None
        log_chi[:, j] = lc
        A[:, j] = _xlogy(mu, lnF[None, :])
        with np.errstate(divide="ignore"):
            B[:, j] = _xlogy(mu, np.log(mu))
    return {"log_chi": log_chi, "A": A, "B": B}


def mass_exponents_direct(log_chi, scale_grid: ScaleGrid):
    fits = [log_slope_fit(scale_grid.scales, row, scale_grid.fit_range)
            for row in np.atleast_2d(log_chi)]
    return np.array([f.slope for f in fits]), fits


def _semilog_slopes(rows, scales, fit_range):
    fits = [semilog_fit(scales, row, fit_range) for row in np.atleast_2d(rows)]
    return np.array([f.slope for f in fits]), fits


def alpha_direct(A, scale_grid: ScaleGrid, fit_range=None):
    """Slope of ``sum_v mu ln F_v`` against ``ln s`` for each q."""
    return _semilog_slopes(A, scale_grid.scales, fit_range or scale_grid.fit_range)


def f_direct(B, scale_grid: ScaleGrid, fit_range=None):
    """Slope of ``sum_v mu ln mu`` against ``ln s`` for each q."""
    return _semilog_slopes(B, scale_grid.scales, fit_range or scale_grid.fit_range)


def direct_spectrum(localF, qgrid: QGrid, scale_grid: ScaleGrid,
                    fit_ranges: dict | None = None, sums: dict | None = None) -> SpectrumResult:
    """Run the canonical estimator on precomputed local fluctuations.

    Parameters
    ----------
    localF : LocalFluctuations
        1D or 2D segment fluctuations; the support dimension is ``localF.dim``.
    qgrid, scale_grid : QGrid, ScaleGrid
        Moment orders and scales. ``scale_grid.scales`` must match
        ``localF.scales``.
    fit_ranges : dict, optional
        Per-quantity overrides keyed by ``"tau"``, ``"alpha"``, ``"f"``.
        With a shared range the Legendre residual is at rounding level.
    sums : dict, optional
        Output of :func:`canonical_sums`, to skip recomputation.
    """
    if not np.array_equal(np.asarray(localF.scales), scale_grid.scales):
        raise MFDMAError("scale grid does not match the fluctuation scales")
    qs = qgrid.qs
    fit_ranges = fit_ranges or {}
    sums = sums or canonical_sums(localF, qs)
    tau_grid = scale_grid
    if "tau" in fit_ranges:
        tau_grid = scale_grid.with_fit_range(*fit_ranges["tau"])
    tau, tau_fits = mass_exponents_direct(sums["log_chi"], tau_grid)
    alpha, alpha_fits = alpha_direct(sums["A"], scale_grid, fit_ranges.get("alpha"))
    f, f_fits = f_direct(sums["B"], scale_grid, fit_ranges.get("f"))
    D_f = localF.dim
    D_q = generalized_dimensions(tau, qs, alpha)
    h = hurst_from_tau(tau, qs, D_f) if qs.size >= 3 else np.full(qs.size, np.nan)
    return SpectrumResult(qs, tau, alpha, f, D_q, h, D_f, "direct",
                          fits={"tau": tau_fits, "alpha": alpha_fits, "f": f_fits},
                          curves=dict(sums))


direct_spectrum_2d = direct_spectrum
