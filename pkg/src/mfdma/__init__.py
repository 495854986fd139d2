"""Multifractal detrending moving-average analysis in one and two dimensions."""

from .analysis import AnalysisReport, analyze, compare_to_oracle, hurst_bench, write_report
from .core import (
    GridTooSparse,
    InsufficientData,
    InsufficientPoints,
    MFDMAError,
    NonPositiveValue,
    QGrid,
    ScaleGrid,
    ScaleTooLarge,
    SpectrumResult,
    ZeroFluctuation,
)
from .detrend import local_fluctuations, local_fluctuations_2d
from .direct import direct_spectrum
from .ingest import read_prices, volatility
from .synth import analytic_alpha, analytic_tau, fbm, pmodel_1d, pmodel_2d
from .traditional import traditional_spectrum

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport", "GridTooSparse", "InsufficientData", "InsufficientPoints",
    "MFDMAError", "NonPositiveValue", "QGrid", "ScaleGrid", "ScaleTooLarge",
    "SpectrumResult", "ZeroFluctuation", "analytic_alpha", "analytic_tau", "analyze",
    "compare_to_oracle", "direct_spectrum", "fbm", "hurst_bench", "local_fluctuations",
    "local_fluctuations_2d", "pmodel_1d", "pmodel_2d", "read_prices",
    "traditional_spectrum", "volatility", "write_report",
]
