import numpy as np
import pytest

import etvrec


def test_dft_is_unitary():
    rng = np.random.default_rng(0)
    x = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
    f = etvrec.dft2(x)
    assert np.isclose(np.linalg.norm(f), np.linalg.norm(x), rtol=1e-12)
    np.testing.assert_allclose(f, np.fft.fft2(x) / 16, atol=1e-12)
    np.testing.assert_allclose(etvrec.dft2_inv(f), x, atol=1e-12)


def test_haar_round_trip():
    x = etvrec.shepp_logan(32)
    np.testing.assert_allclose(etvrec.haar2_inv(etvrec.haar2(x)), x, atol=1e-12)


def test_gradient_and_tv():
    x = np.array([[0.0, 1.0], [2.0, 3.0]])
    gx, gy = etvrec.gradient(x)
    np.testing.assert_allclose(gx.real, [[2, 2], [0, 0]])
    np.testing.assert_allclose(gy.real, [[1, 0], [1, 0]])
    assert etvrec.tv_aniso(x) == pytest.approx(6.0)
    assert etvrec.enhanced_tv(x, 1.0) == pytest.approx(1.0)


def test_full_mask_reconstruction():
    x = etvrec.shepp_logan(32)
    op = etvrec.MeasurementOperator.unweighted(etvrec.full_mask(32))
    y = op.measure(x)
    cfg = etvrec.SolverConfig.enhanced(0.8)
    cfg.max_dca = 2
    cfg.max_inner = 50
    rep = etvrec.solve_enhanced_tv(op, y, cfg, reference=x)
    assert rep["relative_error"] <= 1e-8
    assert rep["image"].shape == (32, 32)


def test_radial_reconstruction_improves_on_zero_fill():
    x = etvrec.shepp_logan(32)
    mask = etvrec.radial_mask(32, 10)
    assert 0 < mask.sampling_rate() < 1
    op = etvrec.MeasurementOperator.unweighted(mask)
    y = op.measure(x)
    zero_fill = op.adjoint(y)
    cfg = etvrec.SolverConfig.enhanced(0.8)
    cfg.max_dca = 3
    cfg.max_inner = 200
    cfg.inner_solve = etvrec.InnerSolve.fft_periodic
    rep = etvrec.solve_enhanced_tv(op, y, cfg, reference=x)
    assert rep["relative_error"] < etvrec.relative_error(x, zero_fill)
    trace = rep["objective_trace"]
    assert all(b <= a + 1e-9 for a, b in zip(trace, trace[1:]))


def test_variable_density_weights():
    mask, rho = etvrec.variable_density_mask(32, 200, 1.0, 5)
    assert len(mask) == 200 and len(rho) == 200
    assert min(rho) > 0


def test_metrics_and_theory():
    x = etvrec.shepp_logan(32)
    assert etvrec.ssim(x, x) == pytest.approx(1.0)
    assert etvrec.relative_error(x, 2 * x) == pytest.approx(1.0)
    k1, k2 = etvrec.rip_constants(0.0)
    assert (k1, k2) == pytest.approx((3.0, 1.0))
    assert etvrec.alpha_bound(1.0, 4, 0.0, "thm1", 64) == pytest.approx(1.0)
    ok, rows, _ = etvrec.check_lemmas(8, 20, 1)
    assert ok and rows


def test_bad_input_raises():
    with pytest.raises(ValueError):
        etvrec.dft2(np.zeros((4, 5)))
    with pytest.raises(ValueError):
        etvrec.rip_constants(0.7)
