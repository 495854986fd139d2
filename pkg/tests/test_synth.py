import math

import numpy as np
import pytest

from mfdma.core import MFDMAError, QGrid
from mfdma.synth import (
    analytic_alpha_1d,
    analytic_alpha_2d,
    analytic_spectrum,
    analytic_tau_1d,
    analytic_tau_2d,
    cascade_oracle,
    fbm,
    fgn_autocovariance,
    pmodel_1d,
    pmodel_2d,
)

P2 = (0.1, 0.2, 0.3, 0.4)


def test_pmodel_1d_examples():
    assert pmodel_1d(0.3, 1) == pytest.approx([0.3, 0.7])
    assert pmodel_1d(0.3, 2) == pytest.approx([0.09, 0.21, 0.21, 0.49])
    assert np.allclose(pmodel_1d(0.5, 6), 2.0**-6)
    with pytest.raises(MFDMAError):
        pmodel_1d(1.2, 3)


@pytest.mark.parametrize("k", [1, 5, 12, 16])
def test_mass_conservation(k):
    assert pmodel_1d(0.3, k).sum() == pytest.approx(1.0, abs=1e-12)
    if k <= 10:
        assert pmodel_2d(P2, k).sum() == pytest.approx(1.0, abs=1e-12)


def test_pmodel_2d_examples():
    assert np.array_equal(pmodel_2d(P2, 1), [[0.1, 0.2], [0.3, 0.4]])
    assert np.allclose(pmodel_2d([0.25] * 4, 4), 4.0**-4)
    assert pmodel_2d(P2, 3).shape == (8, 8)
    with pytest.raises(MFDMAError):
        pmodel_2d([0.1, 0.2, 0.3, 0.3], 2)


def test_analytic_1d_values():
    assert analytic_tau_1d(0.3, 0.0) == pytest.approx(-1.0)
    assert analytic_tau_1d(0.3, 1.0) == pytest.approx(0.0, abs=1e-15)
    assert analytic_tau_1d(0.3, 2.0) == pytest.approx(0.785876, abs=1e-6)
    assert analytic_alpha_1d(0.3, 0.0) == pytest.approx(1.125777, abs=1e-5)
    assert analytic_alpha_1d(0.3, 0.0) == pytest.approx(-math.log(0.21) / (2 * math.log(2)), abs=1e-15)
    assert analytic_alpha_1d(0.3, 200.0) == pytest.approx(0.514573, abs=1e-6)
    assert np.allclose(analytic_alpha_1d(0.5, np.linspace(-5, 5, 11)), 1.0)


def test_analytic_2d_values():
    assert analytic_tau_2d(P2, 0.0) == pytest.approx(-2.0)
    assert analytic_tau_2d(P2, 1.0) == pytest.approx(0.0, abs=1e-15)
    assert analytic_tau_2d(P2, 2.0) == pytest.approx(1.736966, abs=1e-6)
    # symmetric in the four proportions
    q = np.linspace(-4, 4, 17)
    assert np.allclose(analytic_alpha_2d(P2, q), analytic_alpha_2d(P2[::-1], q))


def test_analytic_spectrum_examples():
    q = QGrid.linspace().qs
    D, f = analytic_spectrum(lambda qq: analytic_tau_1d(0.3, qq), lambda qq: analytic_alpha_1d(0.3, qq), q)
    assert f[q == 0][0] == pytest.approx(1.0)
    assert f[q == 1][0] == pytest.approx(0.881291, abs=1e-6)
    assert D[q == 1][0] == pytest.approx(0.881291, abs=1e-6)
    _, f5 = analytic_spectrum(lambda qq: analytic_tau_1d(0.5, qq), lambda qq: analytic_alpha_1d(0.5, qq), q)
    assert np.allclose(f5, 1.0)


def test_oracle_closure_and_concavity():
    q = QGrid.linspace().qs
    for p in ([0.3, 0.7], list(P2)):
        o = cascade_oracle(p, q)
        assert np.max(np.abs(q * o["alpha"] - o["tau"] - o["f_alpha"])) <= 1e-12
        assert np.all(np.diff(o["tau"], 2) <= 1e-12)


def test_fgn_covariance():
    assert fgn_autocovariance(0.7, 0) == pytest.approx(1.0)
    assert fgn_autocovariance(0.7, 1) == pytest.approx((2**1.4 - 2) / 2)
    assert np.allclose(fgn_autocovariance(0.5, [1, 2, 5]), 0.0)


def test_fbm_deterministic_and_white_at_half():
    a, b = fbm(0.7, 4096, seed=1), fbm(0.7, 4096, seed=1)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, fbm(0.7, 4096, seed=2))
    n = 65536
    x = fbm(0.5, n, seed=3)
    r1 = np.corrcoef(x[:-1], x[1:])[0, 1]
    assert abs(r1) <= 3 / math.sqrt(n)


def test_fbm_lag_one_covariance_ensemble():
    n, runs = 4096, 100
    g = []
    for seed in range(runs):
        x = fbm(0.7, n, seed=seed)
        g.append(np.mean(x[:-1] * x[1:]))
    assert np.mean(g) == pytest.approx(0.3195, abs=0.01)


def test_fbm_aggregated_variance_scaling():
    # variance of m-step sums scales as m^(2H)
    ms = np.array([1, 2, 4, 8, 16, 32, 64])
    slopes = []
    for seed in range(100):
        x = fbm(0.7, 8192, seed=seed)
        v = [np.var(x[: 8192 // m * m].reshape(-1, m).sum(axis=1)) for m in ms]
        slopes.append(np.polyfit(np.log(ms), np.log(v), 1)[0] / 2)
    assert np.mean(slopes) == pytest.approx(0.7, abs=0.03)


def test_fbm_rejects():
    with pytest.raises(MFDMAError):
        fbm(1.0, 10)
    with pytest.raises(MFDMAError):
        fbm(0.5, 1)
