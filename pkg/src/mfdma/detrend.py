"""
Moving-average detrending in one and two dimensions.

The 1D fluctuation kernel never forms the global profile. Each segment is
rebuilt from its own increments, so residuals in low-mass regions of a cascade
keep full relative precision instead of inheriting the rounding error of a
running sum that has already reached O(1).
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .core import (
    InsufficientData,
    LocalFluctuations,
    MFDMAError,
    ScaleTooLarge,
    as_series,
    as_surface,
    theta_value,
)


class Residuals(NamedTuple):
    """Residual sequence and its 1-based inclusive index window ``[lo, hi]``."""

    values: np.ndarray
    lo: int
    hi: int


def window_offsets(s: int, theta: float) -> tuple[int, int]:
    """Return ``(back, ahead)``: how many points before/after ``t`` the window spans.

    ``ahead = floor((s-1)*theta)`` and ``back = ceil((s-1)*(1-theta))``; the
    tiny epsilon keeps products like ``0.7*10`` from flooring to 6.
    """
    ahead = int(math.floor((s - 1) * theta + 1e-9))
    return s - 1 - ahead, ahead


def _check_scale(s, n):
    if s < 2:
        raise MFDMAError(f"window size must be >= 2, got {s}")
    if s > n:
        raise ScaleTooLarge(f"window size {s} exceeds series length {n}")


def cumulative_profile(x) -> np.ndarray:
    return np.cumsum(as_series(x))


def moving_average(y, s: int, theta=0.0) -> np.ndarray:
    """Moving average of a profile on the indices where the full window exists.

    Returns ``N - s + 1`` values; entry ``j`` belongs to the 1-based profile
    index ``s - floor((s-1)*theta) + j``.
    """
    y = as_series(y)
    theta = theta_value(theta)
    _check_scale(s, y.size)
    c = np.concatenate(([0.0], np.cumsum(y - y[0])))
    return (c[s:] - c[:-s]) / s + y[0]


def residuals(y, s: int, theta=0.0) -> Residuals:
    """Profile minus its moving average over the valid window."""
    y = as_series(y)
    theta = theta_value(theta)
    _check_scale(s, y.size)
    back, ahead = window_offsets(s, theta)
    n = y.size
    x = np.diff(y, prepend=0.0)
    nblocks = -(-(n - s + 1) // s)
    eps = _block_residuals(x, s, back, nblocks)[: n - s + 1]
    return Residuals(eps, s - ahead, n - ahead)


def _block_residuals(x, s, back, nblocks):
    """Residuals for ``nblocks`` consecutive length-``s`` blocks, from increments.

    Block ``v`` covers residual indices ``[v*s, (v+1)*s)`` (0-based into the
    valid window) and needs profile points ``v*s .. v*s + 2s - 2``, rebased to
    zero at the first of them.
    """
    need = nblocks * s + s - 1
    if x.size < need:
        x = np.concatenate((x, np.zeros(need - x.size)))
    inc = sliding_window_view(x[1:need], 2 * s - 2)[::s][:nblocks]
    prof = np.zeros((nblocks, 2 * s - 1))
    np.cumsum(inc, axis=1, out=prof[:, 1:])
    csum = np.zeros((nblocks, 2 * s))
    np.cumsum(prof, axis=1, out=csum[:, 1:])
    mean = (csum[:, s : 2 * s] - csum[:, :s]) / s
    return (prof[:, back : back + s] - mean).ravel()


def n_segments_1d(n: int, s: int) -> int:
    return n // s - 1


def segment_rms(eps, s: int, n_segments: int | None = None) -> np.ndarray:
    """RMS of the residuals in disjoint length-``s`` segments.

    By default the segment count is ``floor(N/s - 1)`` with ``N`` recovered as
    ``len(eps) + s - 1``; pass ``n_segments`` to override. Segments start at
    the beginning of the residual window and trailing points are dropped.
    """
    eps = np.asarray(eps, dtype=float)
    if n_segments is None:
        n_segments = n_segments_1d(eps.size + s - 1, s)
        if n_segments < 2:
            raise InsufficientData(f"scale {s} leaves {n_segments} segments (< 2)")
    if n_segments < 1 or n_segments * s > eps.size:
        raise InsufficientData(f"cannot cut {n_segments} segments of size {s}")
    seg = eps[: n_segments * s].reshape(n_segments, s)
    return np.sqrt(np.mean(seg * seg, axis=1))


def fluctuations_at_scale(x, s: int, theta=0.0) -> np.ndarray:
    """``F_v(s)`` for every segment of a raw 1D series (profile built internally)."""
    x = as_series(x)
    theta = theta_value(theta)
    _check_scale(s, x.size)
    ns = n_segments_1d(x.size, s)
    if ns < 2:
        raise InsufficientData(f"scale {s} leaves {ns} segments (< 2)")
    back, _ = window_offsets(s, theta)
    eps = _block_residuals(x, s, back, ns).reshape(ns, s)
    return np.sqrt(np.mean(eps * eps, axis=1))


def local_fluctuations(x, scales, theta=0.0) -> LocalFluctuations:
    """Per-segment fluctuations of a 1D series at each scale."""
    x = as_series(x)
    theta = theta_value(theta)
    scales = np.asarray(scales, dtype=int)
    values = tuple(fluctuations_at_scale(x, int(s), theta) for s in scales)
    return LocalFluctuations(scales, values, dim=1, theta=theta,
                             shapes=tuple((v.size,) for v in values))


# -- two dimensions ---------------------------------------------------------


def _theta_pair(theta):
    if isinstance(theta, (tuple, list)):
        t1, t2 = theta
        return theta_value(t1), theta_value(t2)
    t = theta_value(theta)
    return t, t


def cumulative_profile_2d(X) -> np.ndarray:
    return np.cumsum(np.cumsum(as_surface(X), axis=0), axis=1)


def moving_average_2d(y, s1: int, s2: int | None = None, theta=0.0) -> np.ndarray:
    """Separable ``s1 x s2`` box average of a 2D profile on the valid window.

    Output has shape ``(N1 - s1 + 1, N2 - s2 + 1)``; ``theta`` may be a scalar
    or a ``(theta1, theta2)`` pair.
    """
    y = np.asarray(y, dtype=float)
    if y.ndim != 2:
        raise MFDMAError("profile must be 2D")
    s2 = s1 if s2 is None else s2
    _theta_pair(theta)
    _check_scale(s1, y.shape[0])
    _check_scale(s2, y.shape[1])
    # summed-area table; shifting by y[0,0] only trims magnitude
    base = y[0, 0]
    sat = np.zeros((y.shape[0] + 1, y.shape[1] + 1))
    sat[1:, 1:] = np.cumsum(np.cumsum(y - base, axis=0), axis=1)
    box = sat[s1:, s2:] - sat[:-s1, s2:] - sat[s1:, :-s2] + sat[:-s1, :-s2]
    return box / (s1 * s2) + base


def residuals_2d(y, s1: int, s2: int | None = None, theta=0.0) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    s2 = s1 if s2 is None else s2
    t1, t2 = _theta_pair(theta)
    ma = moving_average_2d(y, s1, s2, (t1, t2))
    b1, _ = window_offsets(s1, t1)
    b2, _ = window_offsets(s2, t2)
    m1, m2 = ma.shape
    return y[b1 : b1 + m1, b2 : b2 + m2] - ma


def n_segments_2d(n: int, s: int, theta: float) -> int:
    return int(math.floor((n - s * (1 + theta)) / s + 1e-9))


def segment_rms_2d(eps, s1: int, s2: int | None = None, counts=None) -> np.ndarray:
    """RMS over disjoint ``s1 x s2`` tiles anchored at the window origin.

    ``counts`` is ``(N_s1, N_s2)``; by default as many whole tiles as fit.
    Returns the ``N_s1 x N_s2`` matrix of fluctuations.
    """
    eps = np.asarray(eps, dtype=float)
    s2 = s1 if s2 is None else s2
    if counts is None:
        counts = (eps.shape[0] // s1, eps.shape[1] // s2)
    n1, n2 = counts
    if n1 < 1 or n2 < 1 or n1 * s1 > eps.shape[0] or n2 * s2 > eps.shape[1]:
        raise InsufficientData(f"cannot cut {n1}x{n2} tiles of size {s1}x{s2}")
    tiles = eps[: n1 * s1, : n2 * s2].reshape(n1, s1, n2, s2)
    return np.sqrt(np.mean(tiles * tiles, axis=(1, 3)))


def _tile_residuals_2d(X, s, backs, counts):
    """Residuals of every tile, each built from its own rebased profile.

    Tile ``(v1, v2)`` needs profile rows/cols ``l .. l + 2s - 2``; the profile
    is re-accumulated from the increments inside that square so it measures
    mass relative to the tile's corner. Returns ``(n1, n2, s, s)``.
    """
    n1, n2 = counts
    b1, b2 = backs
    w = 2 * s - 2
    inc = sliding_window_view(X[1:, 1:], (w, w))[::s, ::s][:n1, :n2]
    prof = np.zeros((n1, n2, w + 1, w + 1))
    prof[:, :, 1:, 1:] = np.cumsum(np.cumsum(inc, axis=2), axis=3)
    sat = np.zeros((n1, n2, w + 2, w + 2))
    sat[:, :, 1:, 1:] = np.cumsum(np.cumsum(prof, axis=2), axis=3)
    box = (sat[:, :, s:, s:] - sat[:, :, :s, s:]
           - sat[:, :, s:, :s] + sat[:, :, :s, :s])
    return prof[:, :, b1 : b1 + s, b2 : b2 + s] - box / (s * s)


def fluctuations_at_scale_2d(X, s: int, theta=0.0, profile: str = "local") -> np.ndarray:
    """Matrix ``F_{v1,v2}(s)`` of a raw surface for isotropic ``s x s`` tiles.

    ``profile="local"`` (default) accumulates the surface inside each tile's
    neighbourhood, so a tile's fluctuation tracks the mass near that tile.
    ``profile="global"`` detrends the single whole-surface cumulative sum;
    its differences contain strips reaching the surface edges, which ties
    the fluctuations of measures to one-dimensional marginals.
    """
    X = as_surface(X)
    t1, t2 = _theta_pair(theta)
    n1, n2 = X.shape
    _check_scale(s, min(n1, n2))
    counts = (n_segments_2d(n1, s, t1), n_segments_2d(n2, s, t2))
    if min(counts) < 1 or counts[0] * counts[1] < 4:
        raise InsufficientData(f"scale {s} leaves {counts[0]}x{counts[1]} tiles (< 4)")
    backs = (window_offsets(s, t1)[0], window_offsets(s, t2)[0])
    if profile == "local":
        eps = _tile_residuals_2d(X, s, backs, counts)
        return np.sqrt(np.mean(eps * eps, axis=(2, 3)))
    if profile == "global":
        eps = residuals_2d(cumulative_profile_2d(X), s, s, (t1, t2))
        return segment_rms_2d(eps, s, s, counts)
    raise MFDMAError(f"unknown profile mode {profile!r}")


def local_fluctuations_2d(X, scales, theta=0.0, profile: str = "local") -> LocalFluctuations:
    """Per-tile fluctuations of a surface; one scale in memory at a time."""
    X = as_surface(X)
    t1, t2 = _theta_pair(theta)
    scales = np.asarray(scales, dtype=int)
    mats = [fluctuations_at_scale_2d(X, int(s), (t1, t2), profile) for s in scales]
    return LocalFluctuations(scales, tuple(m.ravel() for m in mats), dim=2,
                             theta=t1, shapes=tuple(m.shape for m in mats))
