"""Initial oscillator states: moments, characteristic functions, derivatives."""

import math

import numpy as np
import pytest

from qbath import states
from qbath.errors import ParameterError, PhysicalityError

SQUEEZED = states.SqueezedDisplaced(disp=0.5 - 0.1j, r=0.6, phi=0.3)
CAT = states.CatState(alpha=1.3 + 0.4j, beta=-0.8 - 0.6j)


def _grid():
    re, im = np.meshgrid(np.linspace(-1.5, 1.5, 11), np.linspace(-1.5, 1.5, 11))
    return (re + 1j * im).ravel()


def test_gaussian_physicality_guard():
    states.GaussianMoments(0.0, 0.2, 0.0)
    with pytest.raises(PhysicalityError):
        states.GaussianMoments(0.0, -0.1, 0.0)
    # |c_aa| exceeds sqrt((n_c+1/2)^2 - 1/4) for the stated occupation
    with pytest.raises(PhysicalityError):
        states.GaussianMoments(0.0, 0.2, 0.5 - 0.04j)
    # boundary case (pure squeezed) passes: |c_aa|^2 = (n_c+1/2)^2 - 1/4
    sh, ch = math.sinh(0.4), math.cosh(0.4)
    states.GaussianMoments(0.0, sh * sh, sh * ch)
    # same central moments pass once the mean is shifted out
    states.GaussianMoments(0.3, 0.09 + 0.2, 0.09)
    with pytest.raises(ParameterError):
        states.SqueezedDisplaced(r=-0.2)
    # overlap -1 within rounding: |alpha - beta| tiny with phase pi accumulated
    with pytest.raises(ParameterError):
        states.CatState(math.pi * 1e8, math.pi * 1e8 + 1e-8j)


def test_vacuum_chi0():
    w = _grid()
    vac = states.vacuum_state()
    assert np.max(np.abs(states.chi0_eval(vac, w) - np.exp(-0.5 * np.abs(w) ** 2))) < 1e-14


def test_chi0_frozen_values():
    # brute-force Fock-space expectations of the displacement operator
    got = states.chi0_eval(SQUEEZED, np.array([0.37 - 0.21j]))[0]
    assert abs(got - (8.4812903580868160e-01 - 1.1606199363949921e-01j)) < 1e-12
    got = states.chi0_eval(CAT, np.array([-0.15 + 0.62j]))[0]
    assert abs(got - (1.3604259828097703e-01 + 3.1754181781184401e-02j)) < 1e-12


def test_cat_frozen_moments():
    mean_a, n_ex, aa = states.initial_moments(CAT)
    assert abs(mean_a - (2.3599565405390771e-01 - 7.0590873513205643e-02j)) < 1e-13
    assert abs(n_ex - 1.2591970395874594e+00) < 1e-13
    assert abs(aa - (9.0387965232431311e-01 + 1.0175054324326160e+00j)) < 1e-13


def test_chi0_bounded_and_hermitian():
    w = _grid()
    for s in (SQUEEZED, CAT, states.GaussianMoments(0.2 + 0.1j, 0.4, 0.02j)):
        vals = states.chi0_eval(s, w)
        assert np.max(np.abs(vals)) <= 1.0 + 1e-12
        flipped = states.chi0_eval(s, -w)
        assert np.max(np.abs(flipped - np.conj(vals))) < 1e-13
        assert states.chi0_eval(s, np.array([0.0j]))[0] == pytest.approx(1.0, abs=1e-14)


def test_degenerate_cat_is_coherent():
    cat = states.CatState(0.7 - 0.2j, 0.7 - 0.2j)
    w = _grid()
    coh = states.GaussianMoments(0.7 - 0.2j, abs(0.7 - 0.2j) ** 2, (0.7 - 0.2j) ** 2)
    assert np.max(np.abs(states.chi0_eval(cat, w) - states.chi0_eval(coh, w))) < 1e-13
    mean_a, n_ex, aa = states.initial_moments(cat)
    assert mean_a == pytest.approx(0.7 - 0.2j, abs=1e-14)
    assert n_ex == pytest.approx(abs(0.7 - 0.2j) ** 2, abs=1e-14)


def test_coherent_overlap():
    g, d = 0.9 + 0.3j, -0.4 + 1.1j
    ov = states.coherent_overlap(g, d)
    assert abs(ov) == pytest.approx(math.exp(-0.5 * abs(g - d) ** 2), rel=1e-13)
    assert states.coherent_overlap(g, g) == pytest.approx(1.0, abs=1e-14)


def test_squeezed_moments_closed_form():
    mom = SQUEEZED.to_gaussian_moments()
    sh, ch = math.sinh(0.6), math.cosh(0.6)
    assert mom.mean_a == 0.5 - 0.1j
    assert mom.n_ex == pytest.approx(abs(0.5 - 0.1j) ** 2 + sh**2, rel=1e-14)
    assert mom.aa == pytest.approx((0.5 - 0.1j) ** 2 - np.exp(0.6j) * sh * ch, rel=1e-14)
    # pure state sits exactly on the covariance bound
    n_c, c_aa = states.central_moments(SQUEEZED)
    assert (n_c + 0.5) ** 2 == pytest.approx(0.25 + abs(c_aa) ** 2, rel=1e-12)


def test_wirtinger_derivatives_match_finite_differences():
    w0 = np.array([0.31 - 0.47j, -0.62 + 0.18j])
    h = 1e-6
    for s in (SQUEEZED, CAT):
        val, dw, dwb = states.chi0_wirtinger(s, w0)
        assert np.max(np.abs(val - states.chi0_eval(s, w0))) < 1e-14
        # Wirtinger: d/dw = (d/dx - i d/dy)/2, d/dw* = (d/dx + i d/dy)/2
        fx = (states.chi0_eval(s, w0 + h) - states.chi0_eval(s, w0 - h)) / (2 * h)
        fy = (states.chi0_eval(s, w0 + 1j * h) - states.chi0_eval(s, w0 - 1j * h)) / (2 * h)
        assert np.max(np.abs(dw - 0.5 * (fx - 1j * fy))) < 1e-8
        assert np.max(np.abs(dwb - 0.5 * (fx + 1j * fy))) < 1e-8


def test_gaussian_chi_params_rejects_cat():
    with pytest.raises(ParameterError):
        states.gaussian_chi_params(CAT)
    assert states.is_gaussian(SQUEEZED)
    assert not states.is_gaussian(CAT)
