import numpy as np
import pytest
from scipy.integrate import solve_ivp

from qbath import TimeGrid, build_model, compute_propagator, stock_model
from qbath.errors import NumericalError, ParameterError
from qbath.model import SpectralDiscretization, dynamical_matrix
from qbath.presets import STOCK_MODEL_NAMES
from qbath.propagator import decay_report, plateau_window, sum_rule_defects


def test_time_grid_validation():
    with pytest.raises(ParameterError):
        TimeGrid(np.array([0.1, 0.2]))
    with pytest.raises(ParameterError):
        TimeGrid(np.array([0.0, 0.5, 0.5]))
    with pytest.raises(ParameterError):
        TimeGrid.linspace(-1.0, 10)


def test_n1_resonant_closed_form(rwa_n1):
    t = rwa_n1.grid.t
    u = 0.35
    a_ref = np.exp(-1j * t) * np.cos(u * t)
    b_ref = -1j * np.exp(-1j * t) * np.sin(u * t)
    assert np.max(np.abs(rwa_n1.A - a_ref)) < 1e-12
    assert np.max(np.abs(rwa_n1.B[:, 0] - b_ref)) < 1e-12
    assert np.max(np.abs(rwa_n1.C)) == 0.0
    assert np.max(np.abs(rwa_n1.D)) == 0.0
    da_ref = np.exp(-1j * t) * (-1j * np.cos(u * t) - u * np.sin(u * t))
    assert np.max(np.abs(rwa_n1.dA - da_ref)) < 1e-12


def test_t0_row_is_exact_identity(ohmic_pp):
    assert ohmic_pp.A[0] == 1.0 + 0.0j
    assert ohmic_pp.C[0] == 0.0 + 0.0j
    assert np.all(ohmic_pp.B[0] == 0.0)
    assert np.all(ohmic_pp.D[0] == 0.0)
    mat = dynamical_matrix(ohmic_pp.model)
    assert ohmic_pp.dA[0] == mat[0, 0]
    np.testing.assert_array_equal(ohmic_pp.dB[0], mat[0, 1 : ohmic_pp.n_modes + 1])


def test_ode_oracle_n16():
    # independent cross-check: integrate drow/dt = row M with a high-order RK
    disc = SpectralDiscretization("OhmicExpCutoff", 0.08, 4.0, 0.2, 5.0, 16)
    m = build_model(disc, 1.0, "PositionPosition")
    grid = TimeGrid(np.array([0.0, 3.0]))
    p = compute_propagator(m, grid)
    mat = dynamical_matrix(m)
    dim = mat.shape[0]
    row0 = np.zeros(dim, dtype=complex)
    row0[0] = 1.0

    def rhs(_, y):
        return y @ mat

    sol = solve_ivp(rhs, (0.0, 3.0), row0, method="DOP853", rtol=1e-12, atol=1e-12)
    row = sol.y[:, -1]
    got = np.concatenate(([p.A[1]], p.B[1], [p.C[1]], p.D[1]))
    assert np.max(np.abs(got - row)) < 1e-8


def test_derivative_rows_match_matrix_product(ohmic_pp):
    mat = dynamical_matrix(ohmic_pp.model)
    i = 37
    row = np.concatenate(([ohmic_pp.A[i]], ohmic_pp.B[i], [ohmic_pp.C[i]], ohmic_pp.D[i]))
    drow = np.concatenate(([ohmic_pp.dA[i]], ohmic_pp.dB[i], [ohmic_pp.dC[i]], ohmic_pp.dD[i]))
    np.testing.assert_allclose(drow, row @ mat, atol=1e-13)


def test_sum_rule_all_stock_models():
    grid = TimeGrid.linspace(30.0, 120)
    for name in STOCK_MODEL_NAMES:
        p = compute_propagator(stock_model(name), grid)
        assert np.max(np.abs(sum_rule_defects(p))) < 1e-10, name


def test_sum_rule_holds_even_for_unstable_model():
    # commutator preservation does not require a bounded-below Hamiltonian
    disc = SpectralDiscretization("Explicit", omegas=[0.04], u=[0.35 + 0j], v=[0.35 + 0j])
    m = build_model(disc, 1.0, "Custom")
    with pytest.raises(ParameterError):
        compute_propagator(m, TimeGrid.linspace(40.0, 50))
    p = compute_propagator(m, TimeGrid.linspace(40.0, 50), require_stable=False)
    assert np.abs(p.A[-1]) > 1.0  # runaway growth
    assert np.max(np.abs(sum_rule_defects(p))) < 1e-10


def test_decay_report_decoupled():
    p = compute_propagator(stock_model("decoupled"), TimeGrid.linspace(20.0, 100))
    rep = decay_report(p)
    assert rep.late_sup_A == pytest.approx(1.0, abs=1e-12)
    assert rep.recurrence_onset is None
    with pytest.raises(NumericalError):
        plateau_window(p)


def test_decay_report_n1_revival():
    p = compute_propagator(stock_model("rwa-n1-resonant"), TimeGrid.linspace(100.0, 1000))
    rep = decay_report(p)
    # |A| = |cos(0.35 t)| first revives at 0.35 t = pi
    assert rep.recurrence_onset == pytest.approx(np.pi / 0.35, abs=0.1)


def test_plateau_window_ohmic(ohmic_rwa, plateau_index):
    i0, i1 = plateau_window(ohmic_rwa)
    assert i1 == ohmic_rwa.n_times - 1  # recurrence far beyond this grid
    sup = np.max(np.abs(ohmic_rwa.A[i0 : i1 + 1]))
    assert sup < 0.05
    idx = plateau_index(ohmic_rwa)
    assert i0 <= idx <= i1
