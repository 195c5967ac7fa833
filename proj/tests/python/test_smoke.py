import math

import numpy as np
import pytest

import vacrabi


def reference():
    p = vacrabi.PhysicalParams()
    return p, vacrabi.reference_rates(p)


def test_thermal_weights():
    w = vacrabi.thermal_weights(0.05, 2)
    assert w[0] == pytest.approx(0.952381, rel=1e-6)
    assert w[1] == pytest.approx(0.0453515, rel=1e-6)
    assert sum(vacrabi.thermal_weights(0.05, 2, True)) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValueError):
        vacrabi.thermal_weights(-1.0, 2)


def test_population_generator_columns_sum_to_zero():
    p, r = reference()
    g = vacrabi.population_generator(p, r)
    assert g.shape == (5, 5)
    assert np.max(np.abs(g.sum(axis=0))) < 1e-12 * np.max(np.abs(g))


def test_closed_form_matches_dense_spectrum():
    p, r = reference()
    closed = np.array(vacrabi.closed_form_eigenvalues(p, r, "rotating"))
    assert closed.size == 25
    dense = np.linalg.eigvals(vacrabi.superoperator(p, r, 2, "rotating"))
    for lam in closed:
        assert np.min(np.abs(dense - lam)) <= 1e-8 * max(1.0, abs(lam))


def test_rabi_curve_lossless_limit():
    p = vacrabi.PhysicalParams()
    t = np.linspace(0.0, 100e-6, 51)
    pg = np.array(vacrabi.rabi_curve(p, vacrabi.RateTable(), t, mode="raw"))
    expected = 0.95 * np.sin(p.g * t) ** 2 + 0.05 * np.sin(math.sqrt(2.0) * p.g * t) ** 2
    assert np.max(np.abs(pg - expected)) < 1e-10
    with pytest.raises(ValueError):
        vacrabi.rabi_curve(p, vacrabi.RateTable(), [0.0, 2e-6, 1e-6])


def test_compare_propagators():
    p, r = reference()
    rep = vacrabi.compare_propagators(p, r, np.linspace(0.0, 20e-6, 5))
    assert rep["spectral_vs_expm"] < 1e-8
    assert rep["spectral_vs_rk4"] < 1e-8
    assert rep["min_eigenvalue"] >= -1e-12


def test_fit_recovers_cavity_rate():
    p, r = reference()
    t = np.linspace(0.0, 0.1, 401)
    pg = vacrabi.rabi_curve(p, r, t)
    fit = vacrabi.fit_gamma_cavity(t, pg, p)
    assert fit["converged"]
    assert fit["gamma_cavity"] == pytest.approx(r.gamma1, rel=1e-3)


def test_q_factor_and_config_errors():
    p = vacrabi.PhysicalParams()
    energy, field = vacrabi.q_factor(p, 1000.0)
    assert energy == pytest.approx(p.omega0 / 1000.0)
    assert field == pytest.approx(energy / 2.0)
    with pytest.raises(ValueError):
        vacrabi.q_factor(p, 0.0)
    with pytest.raises(vacrabi.ConfigError):
        vacrabi.parse_config("g_rad_s = -1\n")
    cfg = vacrabi.parse_config("nbar = 0.1\n")
    assert cfg.nbar == pytest.approx(0.1)
