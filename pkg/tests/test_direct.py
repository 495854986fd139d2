import math

import numpy as np
import pytest

from mfdma.core import LocalFluctuations, QGrid, ScaleGrid, ZeroFluctuation
from mfdma.detrend import local_fluctuations, local_fluctuations_2d
from mfdma.direct import (
    alpha_direct,
    canonical_measure,
    canonical_sums,
    direct_spectrum,
    f_direct,
    log_partition_function,
    mass_exponents_direct,
    partition_function,
)
from mfdma.synth import analytic_alpha_1d, pmodel_1d, pmodel_2d


def test_canonical_measure_examples():
    assert canonical_measure([1.0, 2.0, 5.0], 0.0) == pytest.approx(np.full(3, 1 / 3))
    assert canonical_measure([1.0, 2.0], 2.0) == pytest.approx([0.2, 0.8])
    for q in (-4.0, 1.0, 7.5):
        assert canonical_measure([0.3] * 5, q) == pytest.approx(np.full(5, 0.2))


def test_partition_function_examples():
    assert partition_function([1.0, 2.0, 3.0, 4.0], 0.0) == pytest.approx(4.0)
    assert partition_function([1.0, 2.0], 2.0) == pytest.approx(5.0)
    assert partition_function([1.0, 2.0], -1.0) == pytest.approx(1.5)
    assert log_partition_function([1e-300, 1e-300], -5.0) == pytest.approx(
        math.log(2) + 1500 * math.log(10))


def test_zero_fluctuations():
    assert canonical_measure([0.0, 1.0, 3.0], 1.0) == pytest.approx([0.0, 0.25, 0.75])
    with pytest.raises(ZeroFluctuation):
        canonical_measure([0.0, 1.0], -1.0)
    lf = LocalFluctuations(np.array([4, 8, 16]), (np.ones(4), np.array([0.0, 2.0]), np.ones(2)))
    with pytest.raises(ZeroFluctuation, match="s=8"):
        canonical_sums(lf, [0.0])
    # positive q tolerates empty segments and 0 ln 0 = 0
    sums = canonical_sums(lf, [2.0])
    assert np.all(np.isfinite(sums["B"]))


def test_canonical_identities(rng):
    x = rng.standard_normal(4096)
    lf = local_fluctuations(x, [8, 16, 32, 64, 128], 0.5)
    qs = QGrid.linspace(-5, 5, 0.5).qs
    sums = canonical_sums(lf, qs)
    q0 = qs == 0
    assert np.allclose(np.exp(sums["log_chi"][q0]), lf.counts, rtol=1e-12)
    assert np.allclose(sums["B"][q0], -np.log(lf.counts), atol=1e-12)
    lhs = qs[:, None] * sums["A"] - sums["log_chi"]
    assert np.allclose(lhs, sums["B"], atol=1e-12)


def test_zero_q_slopes_are_exact_counting():
    # N/s - 1 segments exactly on dyadic scales
    n = 2**14
    x = pmodel_1d(0.3, 14)
    sg = ScaleGrid([16, 32, 64, 128, 256])
    sums = canonical_sums(local_fluctuations(x, sg.scales, 0.0), [0.0])
    tau0, _ = mass_exponents_direct(sums["log_chi"], sg)
    f0, _ = f_direct(sums["B"], sg)
    expected = np.polyfit(np.log(sg.scales), np.log(n / sg.scales - 1), 1)[0]
    assert tau0[0] == pytest.approx(expected, abs=1e-12)
    assert f0[0] == pytest.approx(-expected, abs=1e-12)


def test_uniform_cascade_alpha_is_one():
    x = pmodel_1d(0.5, 14)
    sg = ScaleGrid.logspace(10, 160, 12)
    qs = QGrid.linspace(-3, 3, 1.0).qs
    lf = local_fluctuations(x, sg.scales, 0.0)
    alpha, _ = alpha_direct(canonical_sums(lf, qs)["A"], sg)
    assert np.ptp(alpha) < 1e-9
    assert alpha[0] == pytest.approx(1.0, abs=0.05)


def test_pmodel_large_q_alpha_limit(pmodel_report):
    res = pmodel_report.results["direct"]
    limit = -math.log(0.7) / math.log(2)
    # alpha decreases toward the q -> inf limit and tracks the closed form at q = 5
    pos = res.q > 0
    assert np.all(np.diff(res.alpha[pos]) < 0)
    assert limit < res.alpha[-1] < res.alpha[pos][0]
    assert res.alpha[-1] == pytest.approx(analytic_alpha_1d(0.3, 5.0), abs=0.1)
    assert res.alpha[res.q == 0][0] == pytest.approx(1.125777, abs=0.05)
    assert res.tau[res.q == 2][0] == pytest.approx(0.785876, abs=0.05)
    assert res.tau[res.q == 1][0] == pytest.approx(0.0, abs=0.03)


def test_direct_f_peaks_at_zero_q(pmodel_report):
    res = pmodel_report.results["direct"]
    assert res.q[np.argmax(res.f_alpha)] == 0.0
    assert res.f_alpha.max() <= res.D_f + 0.05
    i1 = int(np.flatnonzero(res.q == 1)[0])
    assert res.f_alpha[i1] == pytest.approx(res.alpha[i1], abs=0.02)


def test_shared_range_legendre_closure(pmodel_report):
    assert np.max(pmodel_report.results["direct"].legendre_residual) <= 1e-9


def test_split_ranges_surface_residual():
    x = pmodel_1d(0.3, 14)
    sg = ScaleGrid.logspace(10, 1600, 20)
    lf = local_fluctuations(x, sg.scales, 0.0)
    res = direct_spectrum(lf, QGrid.linspace(-3, 3, 0.5), sg,
                          fit_ranges={"tau": (10, 200), "alpha": (20, 1600)})
    assert res.fits["tau"][0].n_points < res.fits["alpha"][0].n_points
    assert np.max(res.legendre_residual) > 1e-9


def test_direct_h_back_derivation(pmodel_report):
    res = pmodel_report.results["direct"]
    nz = res.q != 0
    assert np.allclose(res.h[nz] * res.q[nz] - 1, res.tau[nz], atol=1e-12)


def test_uniform_surface_spectrum_is_a_point():
    X = pmodel_2d([0.25] * 4, 8)
    sg = ScaleGrid.logspace(6, 32, 10)
    lf = local_fluctuations_2d(X, sg.scales, 0.0)
    res = direct_spectrum(lf, QGrid.linspace(-2, 2, 0.5), sg)
    assert np.ptp(res.alpha) < 1e-9 and np.ptp(res.f_alpha) < 1e-9
    # finite-size tile counts bias the level above 2
    assert res.alpha[0] == pytest.approx(2.0, abs=0.2)
    assert res.f_alpha[0] == pytest.approx(2.0, abs=0.2)
    assert res.D_f == 2


def test_scale_mismatch_rejected():
    lf = local_fluctuations(np.random.default_rng(0).random(1000), [8, 16, 32, 48, 64])
    with pytest.raises(ValueError):
        direct_spectrum(lf, QGrid.linspace(-1, 1, 0.5), ScaleGrid([8, 16, 32, 48, 65]))
