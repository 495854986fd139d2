"""
Shared types, grids and regression primitives.

Everything here is immutable after construction. Estimators exchange numpy
arrays; the dataclasses below only bundle arrays with the metadata needed to
interpret them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

Q_EPS = 1e-9

THETA_PRESETS = {"backward": 0.0, "centered": 0.5, "centred": 0.5, "forward": 1.0}


class MFDMAError(ValueError):
    """Base class for all validation and numerical errors raised by mfdma."""


class NonPositiveValue(MFDMAError):
    pass


class InsufficientPoints(MFDMAError):
    pass


class ScaleTooLarge(MFDMAError):
    pass


class InsufficientData(MFDMAError):
    pass


class ZeroFluctuation(MFDMAError):
    """A segment has zero fluctuation where q <= 0 requires all F_v > 0."""


class GridTooSparse(MFDMAError):
    pass


def theta_value(theta) -> float:
    """Resolve a position parameter given as a float or a preset name."""
    if isinstance(theta, str):
        key = theta.strip().lower()
        if key in THETA_PRESETS:
            return THETA_PRESETS[key]
        try:
            theta = float(key)
        except ValueError:
            raise MFDMAError(f"unknown theta preset {theta!r}") from None
    theta = float(theta)
    if not 0.0 <= theta <= 1.0:
        raise MFDMAError(f"theta must lie in [0, 1], got {theta}")
    return theta


def as_series(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise MFDMAError("series must be a nonempty 1D array")
    if not np.all(np.isfinite(x)):
        raise MFDMAError("series contains non-finite values")
    return x


def as_surface(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or min(X.shape) < 2:
        raise MFDMAError("surface must be a 2D array with both sides >= 2")
    if not np.all(np.isfinite(X)):
        raise MFDMAError("surface contains non-finite values")
    return X


def is_zero_q(q) -> np.ndarray | bool:
    return np.abs(q) < Q_EPS


@dataclass(frozen=True)
class QGrid:
    """Increasing set of moment orders. ``zero`` flags entries treated as q=0."""

    qs: np.ndarray

    def __post_init__(self):
        qs = np.asarray(self.qs, dtype=float).ravel()
        if qs.size == 0:
            raise MFDMAError("q grid is empty")
        if np.any(np.diff(qs) <= 0):
            raise MFDMAError("q grid must be strictly increasing")
        # snap values within Q_EPS of zero so downstream branches see an exact 0
        qs = np.where(is_zero_q(qs), 0.0, qs)
        object.__setattr__(self, "qs", qs)

    @classmethod
    def linspace(cls, q_min=-5.0, q_max=5.0, step=0.25) -> "QGrid":
        n = int(round((q_max - q_min) / step)) + 1
        return cls(np.round(q_min + step * np.arange(n), 12))

    @property
    def zero(self) -> np.ndarray:
        return is_zero_q(self.qs)

    def __len__(self):
        return self.qs.size


@dataclass(frozen=True)
class ScaleGrid:
    """Integer window sizes plus the closed interval used for regressions."""

    scales: np.ndarray
    fit_range: tuple[int, int] | None = None

    def __post_init__(self):
        scales = np.asarray(self.scales)
        if scales.size == 0 or not np.all(scales == np.round(scales)):
            raise MFDMAError("scales must be a nonempty sequence of integers")
        scales = scales.astype(int).ravel()
        if np.any(np.diff(scales) <= 0):
            raise MFDMAError("scales must be strictly increasing")
        if scales[0] < 3:
            raise MFDMAError("scales must be >= 3")
        object.__setattr__(self, "scales", scales)
        lo, hi = self.fit_range or (int(scales[0]), int(scales[-1]))
        object.__setattr__(self, "fit_range", (int(lo), int(hi)))
        if self.fit_mask.sum() < 5:
            raise MFDMAError(
                f"fit range {self.fit_range} holds fewer than 5 scales"
            )

    @classmethod
    def logspace(cls, s_min, s_max, num=30, fit_range=None) -> "ScaleGrid":
        s = np.unique(np.round(np.geomspace(s_min, s_max, num)).astype(int))
        return cls(s, fit_range)

    @classmethod
    def default_1d(cls, n, num=30) -> "ScaleGrid":
        """Scales 10..N/10; fits stop at N/100 where enough segments remain."""
        grid = cls.logspace(10, max(n // 10, 10), num)
        hi = n // 100
        if np.sum((grid.scales >= 10) & (grid.scales <= hi)) >= 5:
            return grid.with_fit_range(10, hi)
        return grid

    @classmethod
    def default_2d(cls, shape, num=30) -> "ScaleGrid":
        return cls.logspace(10, max(min(shape) // 8, 10), num)

    @property
    def fit_mask(self) -> np.ndarray:
        lo, hi = self.fit_range
        return (self.scales >= lo) & (self.scales <= hi)

    def with_fit_range(self, lo, hi) -> "ScaleGrid":
        return ScaleGrid(self.scales, (lo, hi))


@dataclass(frozen=True)
class LocalFluctuations:
    """Per-segment RMS fluctuations, one flat array per scale.

    For 2D input each array is the row-major flattening of the
    ``N_s1 x N_s2`` segment matrix; ``shapes`` keeps the original layout.
    """

    scales: np.ndarray
    values: tuple[np.ndarray, ...]
    dim: int = 1
    theta: float = 0.0
    shapes: tuple[tuple[int, ...], ...] = field(default=())

    @property
    def counts(self) -> np.ndarray:
        return np.array([v.size for v in self.values])

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r_squared: float
    n_points: int
    ordinate_kind: str = "log_value"
    abscissa_kind: str = "log_scale"


@dataclass
class SpectrumResult:
    """Per-q exponents produced by one estimator.

    ``h`` is NaN-filled for the direct approach unless back-derived. ``fits``
    maps a quantity name to a list of :class:`FitResult` aligned with ``q``;
    ``curves`` holds the regressed ordinates, shape ``(len(q), len(scales))``.
    """

    q: np.ndarray
    tau: np.ndarray
    alpha: np.ndarray
    f_alpha: np.ndarray
    D_q: np.ndarray
    h: np.ndarray
    D_f: int
    approach: str
    fits: dict = field(default_factory=dict)
    curves: dict = field(default_factory=dict)

    @property
    def legendre_residual(self) -> np.ndarray:
        return np.abs(self.q * self.alpha - self.tau - self.f_alpha)

    @property
    def width(self) -> float:
        return float(np.max(self.alpha) - np.min(self.alpha))


def _select(scales, values, fit_range):
    s = np.asarray(scales, dtype=float)
    v = np.asarray(values, dtype=float)
    if s.shape != v.shape:
        raise MFDMAError("scales and values must have the same length")
    if fit_range is not None:
        lo, hi = fit_range
        keep = (s >= lo) & (s <= hi)
        s, v = s[keep], v[keep]
    if s.size < 3:
        raise InsufficientPoints(f"need >= 3 points in fit range, got {s.size}")
    return s, v


def _ols(x, y):
    xm, ym = x.mean(), y.mean()
    dx, dy = x - xm, y - ym
    sxx = np.dot(dx, dx)
    slope = np.dot(dx, dy) / sxx
    intercept = ym - slope * xm
    syy = np.dot(dy, dy)
    if syy > 0:
        resid = dy - slope * dx
        r2 = 1.0 - np.dot(resid, resid) / syy
    else:
        r2 = 1.0
    return float(slope), float(intercept), float(min(max(r2, 0.0), 1.0))


def loglog_fit(scales: Sequence[float], values: Sequence[float], fit_range=None) -> FitResult:
    """Least-squares slope of ``ln(value)`` against ``ln(s)``.

    Parameters
    ----------
    scales, values : array-like
        Abscissa (window sizes) and strictly positive ordinates.
    fit_range : (s_min, s_max), optional
        Closed interval of scales to keep. All scales by default.

    Raises
    ------
    NonPositiveValue
        If a value inside the range is <= 0.
    InsufficientPoints
        If fewer than 3 points remain.
    """
    s, v = _select(scales, values, fit_range)
    if np.any(v <= 0):
        raise NonPositiveValue("log-log fit requires positive values")
    return FitResult(*_ols(np.log(s), np.log(v)), s.size, "log_value")


def semilog_fit(scales, values, fit_range=None) -> FitResult:
    """Least-squares slope of ``value`` against ``ln(s)``."""
    s, v = _select(scales, values, fit_range)
    if not np.all(np.isfinite(v)):
        raise MFDMAError("semi-log fit requires finite values")
    return FitResult(*_ols(np.log(s), v), s.size, "linear_value")


def log_slope_fit(scales, log_values, fit_range=None) -> FitResult:
    """Log-log fit when the ordinate is already logarithmic.

    Avoids the overflow of exponentiating ``ln chi`` at large |q|.
    """
    fit = semilog_fit(scales, log_values, fit_range)
    return FitResult(fit.slope, fit.intercept, fit.r_squared, fit.n_points, "log_value")
