import math

import numpy as np
import pytest

from mfdma.core import GridTooSparse, LocalFluctuations, QGrid, ScaleGrid, ZeroFluctuation
from mfdma.synth import analytic_alpha_1d, analytic_tau_1d
from mfdma.traditional import (
    fluctuation_function,
    generalized_dimensions,
    hurst_exponents,
    hurst_from_tau,
    legendre_spectrum,
    log_fluctuation_matrix,
    mass_exponents_from_hurst,
    traditional_spectrum,
)


def test_fluctuation_function_examples():
    for q in (-3.0, 0.0, 0.5, 4.0):
        assert fluctuation_function([2.5] * 7, q) == pytest.approx(2.5)
    assert fluctuation_function([1.0, 2.0], 2.0) == pytest.approx(math.sqrt(2.5))
    assert fluctuation_function([1.0, 2.0], 0.0) == pytest.approx(math.sqrt(2.0))


def test_fluctuation_function_zero_segments():
    assert fluctuation_function([0.0, 2.0], 2.0) == pytest.approx(math.sqrt(2.0))
    with pytest.raises(ZeroFluctuation):
        fluctuation_function([0.0, 2.0], 0.0)
    with pytest.raises(ZeroFluctuation):
        fluctuation_function([0.0, 2.0], -1.0)


def test_zero_fluctuation_reports_scale():
    lf = LocalFluctuations(np.array([4, 8]), (np.ones(3), np.array([0.0, 1.0])))
    with pytest.raises(ZeroFluctuation, match="s=8"):
        log_fluctuation_matrix(lf, [-1.0, 1.0])


def test_extreme_q_does_not_overflow():
    F = np.array([1e-200, 1e-100, 1.0])
    val = log_fluctuation_matrix(LocalFluctuations(np.array([4]), (F,)), [-50.0, 50.0])
    assert np.all(np.isfinite(val))


def test_hurst_exponents_examples():
    sg = ScaleGrid([4, 8, 16, 32, 64])
    s = sg.scales.astype(float)
    log_F = np.vstack([np.log(s), np.log(2 * s**0.35)])
    h, fits = hurst_exponents(log_F, sg)
    assert h == pytest.approx([1.0, 0.35])
    assert fits[1].r_squared == pytest.approx(1.0)


def test_mass_exponents_and_dimensions():
    qs = np.array([-1.0, 0.0, 1.0, 2.0])
    tau = mass_exponents_from_hurst([0.9, 0.8, 0.75, 0.7], qs, 1)
    assert tau[1] == -1 and tau[3] == pytest.approx(0.4)
    assert mass_exponents_from_hurst([0.3] * 4, qs, 2)[1] == -2
    D = generalized_dimensions(tau, qs)
    assert D[1] == 1 and D[3] == pytest.approx(0.4) and np.isnan(D[2])
    assert generalized_dimensions([-2.0], [0.0])[0] == 2
    assert generalized_dimensions(tau, qs, alpha=np.full(4, 0.6))[2] == 0.6


def test_legendre_of_linear_tau_is_a_point():
    qs = QGrid.linspace().qs
    alpha, f = legendre_spectrum(qs * 0.6 - 1, qs)
    assert np.allclose(alpha, 0.6) and np.allclose(f, 1.0)
    with pytest.raises(GridTooSparse):
        legendre_spectrum([0.0, 1.0], [0.0, 1.0])


def test_legendre_of_analytic_tau():
    qs = QGrid.linspace().qs
    alpha, _ = legendre_spectrum(analytic_tau_1d(0.3, qs), qs)
    # one-sided differences at the two grid ends are first order
    inner = slice(1, -1)
    assert np.max(np.abs(alpha - analytic_alpha_1d(0.3, qs))[inner]) <= 2e-3


def test_hurst_from_tau():
    qs = QGrid.linspace(-2, 2, 0.5).qs
    tau = 0.7 * qs - 1
    assert hurst_from_tau(tau, qs) == pytest.approx(np.full(qs.size, 0.7))
    assert hurst_from_tau(0.4 * qs - 2, qs, 2) == pytest.approx(np.full(qs.size, 0.4))


def test_traditional_spectrum_monofractal_measure():
    # identical fluctuations in every segment with F = s**0.6
    scales = np.array([8, 16, 32, 64, 128, 256])
    values = tuple(np.full(4096 // s - 1, s**0.6) for s in scales)
    lf = LocalFluctuations(scales, values)
    res = traditional_spectrum(lf, QGrid.linspace(-3, 3, 0.5), ScaleGrid(scales))
    assert np.allclose(res.h, 0.6)
    assert np.allclose(res.tau, 0.6 * res.q - 1)
    assert np.max(res.legendre_residual) < 1e-12
