"""Closed-form purity references for number-conserving couplings."""

import math

import numpy as np
import pytest

from qbath import rwa
from qbath.baths import EquilibriumBath
from qbath.errors import ParameterError
from qbath.observables import purity
from qbath.states import CatState, SqueezedDisplaced, coherent_overlap


def test_squeezed_reference_values():
    # half survival at r = 1: 1 / sqrt(1 + sinh(1)^2) = 1 / cosh(1)
    assert rwa.purity_squeezed_rwa(0.5, 1.0) == pytest.approx(
        1.0 / math.cosh(1.0), abs=1e-15
    )
    assert rwa.purity_squeezed_rwa(0.5, 1.0) == pytest.approx(0.6480542736638855, abs=1e-15)
    assert rwa.purity_squeezed_rwa(0.0, 1.7) == 1.0
    assert rwa.purity_squeezed_rwa(1.0, 1.7) == 1.0
    assert rwa.purity_squeezed_rwa(0.3, 0.0) == 1.0


def test_squeezed_symmetry_and_monotonicity():
    for s in np.linspace(0.0, 1.0, 41):
        assert rwa.purity_squeezed_rwa(s, 0.8) == pytest.approx(
            rwa.purity_squeezed_rwa(1.0 - s, 0.8), abs=1e-15
        )
    # purity decreases with squeezing and bottoms out at s = 1/2
    vals_r = [rwa.purity_squeezed_rwa(0.4, r) for r in (0.0, 0.5, 1.0, 2.0)]
    assert all(a > b for a, b in zip(vals_r, vals_r[1:]))
    vals_s = [rwa.purity_squeezed_rwa(s, 1.0) for s in (0.5, 0.35, 0.2, 0.05)]
    assert all(a < b for a, b in zip(vals_s, vals_s[1:]))


def test_cat_reference_shape():
    a, b = 1.1 + 0.3j, -0.9 + 0.1j
    for s in np.linspace(0.0, 1.0, 41):
        val = rwa.purity_cat_rwa(s, a, b)
        assert val >= 0.5 - 1e-9
        assert val <= 1.0 + 1e-12
        assert val == pytest.approx(rwa.purity_cat_rwa(1.0 - s, a, b), abs=1e-14)
    assert rwa.purity_cat_rwa(0.0, a, b) == pytest.approx(1.0, abs=1e-14)
    assert rwa.purity_cat_rwa(1.0, a, b) == pytest.approx(1.0, abs=1e-14)
    # identical components: an ordinary coherent state stays pure
    assert rwa.purity_cat_rwa(0.37, 0.8j, 0.8j) == pytest.approx(1.0, abs=1e-13)
    # well-separated components approach the statistical-mixture floor
    assert rwa.purity_cat_rwa(0.5, 4.0, -4.0) == pytest.approx(0.5, abs=1e-4)


def test_cat_half_survival_overlap_form():
    # at s = 1/2: P = 1 - (1 - R)^2 / (2 (1 + R cos phi)^2)
    for a, b in ((1.1 + 0.3j, -0.9 + 0.1j), (0.6, 0.6 + 1.2j), (2.0, -1.0 + 0.5j)):
        params = rwa.OverlapParams.from_cat(CatState(a, b))
        expected = 1.0 - (1.0 - params.R) ** 2 / (
            2.0 * (1.0 + params.R * math.cos(params.varphi)) ** 2
        )
        assert rwa.purity_cat_rwa(0.5, a, b) == pytest.approx(expected, abs=1e-13)


def test_overlap_params():
    a, b = 0.9 + 0.4j, -0.2 + 1.0j
    ov = coherent_overlap(a, b)
    params = rwa.OverlapParams.from_cat(CatState(a, b))
    assert params.R == pytest.approx(abs(ov), abs=1e-15)
    assert params.varphi == pytest.approx(math.atan2(ov.imag, ov.real), abs=1e-15)
    with pytest.raises(ParameterError):
        rwa.OverlapParams(R=1.2, varphi=0.0)


def test_survival_argument_validation():
    for bad in (-0.01, 1.01, math.nan):
        with pytest.raises(ParameterError):
            rwa.purity_squeezed_rwa(bad, 1.0)
        with pytest.raises(ParameterError):
            rwa.purity_cat_rwa(bad, 1.0, -1.0 + 0.2j)


def test_pipeline_matches_squeezed_reference(rwa_n1):
    # vacuum bath, number-conserving coupling: quadrature purity along the
    # trajectory against the closed form in s = |A(t)|^2
    p = rwa_n1
    s_state = SqueezedDisplaced(disp=0.4 - 0.3j, r=0.9, phi=0.7)
    bath = EquilibriumBath(math.inf)
    for i in (0, 12, 31, 50, 70):
        absA2 = abs(p.A[i]) ** 2
        closed = purity(p, i, bath, s_state, method="closed")
        assert abs(closed - rwa.purity_squeezed_rwa(absA2, 0.9)) < 1e-12
        quad = purity(p, i, bath, s_state, method="quadrature", tol=1e-9)
        assert abs(quad - rwa.purity_squeezed_rwa(absA2, 0.9)) < 1e-7


def test_pipeline_matches_cat_reference(rwa_n1):
    p = rwa_n1
    cat = CatState(1.3 + 0.4j, -0.8 - 0.6j)
    bath = EquilibriumBath(math.inf)
    for i in (0, 12, 31, 50, 70):
        absA2 = abs(p.A[i]) ** 2
        quad = purity(p, i, bath, cat, tol=1e-9)
        assert abs(quad - rwa.purity_cat_rwa(absA2, cat.alpha, cat.beta)) < 1e-7


def test_min_purity_check_on_trajectory(rwa_n1):
    p = rwa_n1
    absA2 = np.abs(p.A) ** 2
    pur = np.array([rwa.purity_squeezed_rwa(s, 1.0) for s in absA2])
    report = rwa.min_purity_check(pur, absA2)
    # minimum sits at |A|^2 = 1/2 up to grid resolution in s
    ds = float(np.max(np.abs(np.diff(absA2))))
    assert abs(report.absA2_min - 0.5) <= ds
    assert report.purity_min == pytest.approx(1.0 / math.cosh(1.0), abs=1e-4)
    # interpolation-limited on this grid; exact mirror pairs are checked below
    assert report.symmetry_defect < 1e-5
    assert report.index_min == int(np.argmin(pur))


def test_symmetry_exact_on_mirrored_grid():
    # cos^2(u t) and cos^2(pi/2 - u t) sum to one, so a grid symmetric about
    # u t = pi/4 pairs every survival value with its mirror exactly
    from qbath import TimeGrid, compute_propagator, stock_model

    m = stock_model("rwa-n1-resonant")
    u = float(np.real(m.u[0]))
    p = compute_propagator(m, TimeGrid.linspace(math.pi / (2.0 * u), 80))
    absA2 = np.abs(p.A) ** 2
    assert np.max(np.abs(absA2 + absA2[::-1] - 1.0)) < 1e-12
    pur = np.array([rwa.purity_squeezed_rwa(s, 1.3) for s in absA2])
    assert np.max(np.abs(pur - pur[::-1])) < 1e-12


def test_min_purity_check_constant_series():
    pur = np.full(7, 0.83)
    report = rwa.min_purity_check(pur, np.full(7, 0.6))
    assert report.symmetry_defect == 0.0
    assert report.purity_min == 0.83
    with pytest.raises(ParameterError):
        rwa.min_purity_check(np.ones(3), np.ones(4))
