"""Exact time-local generators for the reduced characteristic function.

With w = eta A^* - eta^* C, the transformed initial factor chi~ = chi0(w)
obeys an advection equation with drift coefficients

    xi   = (A^* dA - C^* dC) / (|A|^2 - |C|^2)
    zeta = (C dA - A dC) / (|A|^2 - |C|^2)

For Gaussian influence functions F (equilibrium and coherent preparations)
the full chi = chi~ F satisfies

    dchi/dt = (xi^* eta + zeta eta^*) dchi/deta
            + (xi eta^* + zeta^* eta) dchi/deta^*
            + (kappa |eta|^2 + mu^* eta^2 + mu eta^*2 + sigma^* eta
               - sigma eta^*) chi

with kappa, mu, sigma given by the influence parameters, their exact time
derivatives, and (xi, zeta).  For arbitrary F the generator keeps log-
derivatives of F explicitly.  Everything here evaluates both sides of these
identities along the exact solution; nothing is integrated forward.

The drift denominator |A|^2 - |C|^2 can cross zero (e.g. on resonance at
u t = pi/2); points at or below the floor raise SingularGeneratorError from
the scalar entry points and are flagged invalid in the series form.  The
coefficients are never regularized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import laguerre
from .baths import (
    BathSpec,
    CoherentStateBath,
    EquilibriumBath,
    NumberStateBath,
    bath_F_eval,
    bath_f_params,
    occupation,
)
from .errors import ParameterError, SingularGeneratorError
from .observables import chi_eval
from .propagator import PropagatorCoefficients
from .states import OscillatorState, chi0_wirtinger, gaussian_chi_params, is_gaussian

__all__ = [
    "DENOM_FLOOR",
    "GeneratorCoefficients",
    "GaussianFSeries",
    "GeneralResidualReport",
    "xi_zeta",
    "equilibrium_f_series",
    "coherent_f_series",
    "f_series_for",
    "gaussian_generator",
    "generator_series",
    "generator_residual",
    "general_generator_apply",
    "general_generator_residual",
    "chi_time_derivative",
]

DENOM_FLOOR = 1e-8


@dataclass
class GeneratorCoefficients:
    """Time-local generator coefficients at one grid index."""

    xi: complex
    zeta: complex
    kappa: complex  # real up to rounding
    mu: complex
    sigma: complex
    denom: float
    valid: bool


@dataclass
class GaussianFSeries:
    """Gaussian influence parameters and exact derivatives on the whole grid."""

    delta: np.ndarray
    alpha: np.ndarray
    gamma: np.ndarray
    ddelta: np.ndarray
    dalpha: np.ndarray
    dgamma: np.ndarray


def _weighted_series(p: PropagatorCoefficients, weights: np.ndarray) -> GaussianFSeries:
    b, d, db, dd = p.B, p.D, p.dB, p.dD
    alpha = (np.abs(b) ** 2 + np.abs(d) ** 2) @ weights
    gamma = (b * d) @ weights
    dalpha = 2.0 * np.real(np.conj(b) * db + np.conj(d) * dd) @ weights
    dgamma = (db * d + b * dd) @ weights
    zeros = np.zeros(p.n_times, dtype=complex)
    return GaussianFSeries(
        delta=zeros,
        alpha=np.real(alpha),
        gamma=gamma,
        ddelta=zeros.copy(),
        dalpha=np.real(dalpha),
        dgamma=dgamma,
    )


def equilibrium_f_series(p: PropagatorCoefficients, beta: float) -> GaussianFSeries:
    """Thermal influence parameters (delta = 0) with exact time derivatives."""
    nbar = occupation(beta, p.model.omegas, p.model.units.hbar)
    return _weighted_series(p, nbar + 0.5)


def coherent_f_series(p: PropagatorCoefficients, amps: np.ndarray) -> GaussianFSeries:
    """Coherent-preparation influence parameters with exact time derivatives."""
    amps = np.atleast_1d(np.asarray(amps, dtype=complex))
    if amps.shape != (p.n_modes,):
        raise ParameterError(f"expected {p.n_modes} amplitudes, got {amps.size}")
    fs = _weighted_series(p, np.full(p.n_modes, 0.5))
    fs.delta = p.B @ amps + p.D @ np.conj(amps)
    fs.ddelta = p.dB @ amps + p.dD @ np.conj(amps)
    return fs


def f_series_for(p: PropagatorCoefficients, bath: BathSpec) -> GaussianFSeries:
    """Gaussian influence series for an equilibrium or coherent preparation."""
    if isinstance(bath, EquilibriumBath):
        return equilibrium_f_series(p, bath.beta)
    if isinstance(bath, CoherentStateBath):
        return coherent_f_series(p, bath.amps)
    raise ParameterError("number-state baths have no Gaussian influence series")


def xi_zeta(
    p: PropagatorCoefficients, i: int, *, denom_floor: float = DENOM_FLOOR
) -> tuple[complex, complex, float]:
    """Drift coefficients and their denominator |A|^2 - |C|^2 at index i.

    Raises SingularGeneratorError when the denominator is at or below the
    floor; the coefficients are never regularized.
    """
    a_t, c_t, da_t, dc_t = p.A[i], p.C[i], p.dA[i], p.dC[i]
    denom = abs(a_t) ** 2 - abs(c_t) ** 2
    if denom <= denom_floor:
        raise SingularGeneratorError(
            f"|A|^2 - |C|^2 = {denom:.3e} <= floor {denom_floor:.1e} at t = {p.grid.t[i]}"
        )
    xi = (np.conj(a_t) * da_t - np.conj(c_t) * dc_t) / denom
    zeta = (c_t * da_t - a_t * dc_t) / denom
    return complex(xi), complex(zeta), float(denom)


def gaussian_generator(
    p: PropagatorCoefficients,
    i: int,
    fs: GaussianFSeries,
    *,
    denom_floor: float = DENOM_FLOOR,
) -> GeneratorCoefficients:
    """Generator coefficients for a Gaussian influence function at index i."""
    xi, zeta, denom = xi_zeta(p, i, denom_floor=denom_floor)
    al, ga, de = float(fs.alpha[i]), complex(fs.gamma[i]), complex(fs.delta[i])
    dal, dga, dde = float(fs.dalpha[i]), complex(fs.dgamma[i]), complex(fs.ddelta[i])
    kappa = al * (xi + np.conj(xi)) - 2.0 * (zeta * np.conj(ga) + np.conj(zeta) * ga) - dal
    mu = zeta * al - 2.0 * xi * ga + dga
    sigma = zeta * np.conj(de) - xi * de + dde
    return GeneratorCoefficients(
        xi=xi, zeta=zeta, kappa=complex(kappa), mu=complex(mu), sigma=complex(sigma),
        denom=float(denom), valid=True,
    )


def generator_series(
    p: PropagatorCoefficients,
    fs: GaussianFSeries,
    *,
    denom_floor: float = DENOM_FLOOR,
) -> dict[str, np.ndarray]:
    """Vectorized generator coefficients with validity flags (no raising)."""
    denom = np.abs(p.A) ** 2 - np.abs(p.C) ** 2
    valid = denom > denom_floor
    safe = np.where(valid, denom, 1.0)
    xi = (np.conj(p.A) * p.dA - np.conj(p.C) * p.dC) / safe
    zeta = (p.C * p.dA - p.A * p.dC) / safe
    kappa = fs.alpha * 2.0 * np.real(xi) - 2.0 * (
        zeta * np.conj(fs.gamma) + np.conj(zeta) * fs.gamma
    ) - fs.dalpha
    mu = zeta * fs.alpha - 2.0 * xi * fs.gamma + fs.dgamma
    sigma = zeta * np.conj(fs.delta) - xi * fs.delta + fs.ddelta
    for arr in (xi, zeta, kappa, mu, sigma):
        arr[~valid] = np.nan
    return {
        "t": p.grid.t.copy(),
        "xi": xi,
        "zeta": zeta,
        "kappa": kappa,
        "mu": mu,
        "sigma": sigma,
        "denom": denom,
        "valid": valid,
    }


def _gaussian_logF_derivs(fs: GaussianFSeries, i: int, eta: np.ndarray):
    de, al, ga = complex(fs.delta[i]), float(fs.alpha[i]), complex(fs.gamma[i])
    dde, dal, dga = complex(fs.ddelta[i]), float(fs.dalpha[i]), complex(fs.dgamma[i])
    d_eta = np.conj(de) - al * np.conj(eta) + 2.0 * np.conj(ga) * eta
    d_etab = -de - al * eta + 2.0 * ga * np.conj(eta)
    d_t = (
        np.conj(dde) * eta
        - dde * np.conj(eta)
        - dal * np.abs(eta) ** 2
        + np.conj(dga) * eta**2
        + dga * np.conj(eta) ** 2
    )
    return d_eta, d_etab, d_t


def _number_logF_derivs(p: PropagatorCoefficients, i: int, n: np.ndarray, eta: np.ndarray):
    """(dlnF/deta, dlnF/deta^*, dlnF/dt, ok) for a number-state preparation."""
    fs0 = _weighted_series(p, np.full(p.n_modes, 0.5))
    d_eta, d_etab, d_t = _gaussian_logF_derivs(fs0, i, eta)
    ok = np.ones(eta.shape, dtype=bool)
    b, d, db, dd = p.B[i], p.D[i], p.dB[i], p.dD[i]
    for k in np.nonzero(n)[0]:
        zk = eta * np.conj(b[k]) - np.conj(eta) * d[k]
        zk_c = np.conj(zk)
        x = np.abs(zk) ** 2
        ratio, ok_k = laguerre.log_derivative(int(n[k]), x)
        dzk_t = eta * np.conj(db[k]) - np.conj(eta) * dd[k]
        d_eta = d_eta + ratio * (np.conj(b[k]) * zk_c - np.conj(d[k]) * zk)
        d_etab = d_etab + ratio * (b[k] * zk - d[k] * zk_c)
        d_t = d_t + ratio * 2.0 * np.real(dzk_t * zk_c)
        ok &= ok_k
    return d_eta, d_etab, d_t, ok


def _logF_derivs(p: PropagatorCoefficients, i: int, bath: BathSpec, eta: np.ndarray):
    if isinstance(bath, NumberStateBath):
        return _number_logF_derivs(p, i, bath.n, eta)
    fs = f_series_for(p, bath)
    d_eta, d_etab, d_t = _gaussian_logF_derivs(fs, i, eta)
    return d_eta, d_etab, d_t, np.ones(eta.shape, dtype=bool)


def _chi_pieces(
    p: PropagatorCoefficients, i: int, bath: BathSpec, s: OscillatorState, eta: np.ndarray
):
    """chi, its eta-Wirtinger derivatives, and the chi0 pieces for reuse."""
    a_t, c_t = p.A[i], p.C[i]
    w = eta * np.conj(a_t) - np.conj(eta) * c_t
    chi0, c0w, c0wb = chi0_wirtinger(s, w)
    f_val = bath_F_eval(p, i, bath, eta)
    d_eta, d_etab, d_t, ok = _logF_derivs(p, i, bath, eta)
    chi = chi0 * f_val
    dchi_eta = (c0w * np.conj(a_t) - c0wb * np.conj(c_t)) * f_val + chi * d_eta
    dchi_etab = (-c0w * c_t + c0wb * a_t) * f_val + chi * d_etab
    return chi, dchi_eta, dchi_etab, (chi0, c0w, c0wb, f_val, d_t), ok


def chi_time_derivative(
    p: PropagatorCoefficients, i: int, bath: BathSpec, s: OscillatorState, eta
) -> tuple[np.ndarray, np.ndarray]:
    """Exact d chi/dt from the explicit time dependence of the solution.

    Returns (dchi_dt, ok); ok flags nodes where the bath factor F passes too
    close to a zero for its logarithmic derivative to be reliable.
    """
    eta = np.asarray(eta, dtype=complex)
    _, _, _, (chi0, c0w, c0wb, f_val, d_t), ok = _chi_pieces(p, i, bath, s, eta)
    da_t, dc_t = p.dA[i], p.dC[i]
    dw_t = eta * np.conj(da_t) - np.conj(eta) * dc_t
    dwb_t = np.conj(eta) * da_t - eta * np.conj(dc_t)
    dchi = (c0w * dw_t + c0wb * dwb_t) * f_val + chi0 * f_val * d_t
    return dchi, ok


def generator_residual(
    p: PropagatorCoefficients,
    i: int,
    bath: BathSpec,
    s: OscillatorState,
    eta=None,
    *,
    denom_floor: float = DENOM_FLOOR,
) -> float:
    """Max |dchi/dt - generator RHS| / max |chi| for Gaussian influence baths.

    The left side uses exact parameter derivatives of the closed-form
    solution; the right side uses the generator coefficients.  Their
    agreement verifies the coefficient formulas along the trajectory.
    """
    if isinstance(bath, NumberStateBath):
        raise ParameterError("use general_generator_residual for number-state baths")
    if eta is None:
        from .observables import square_eta_grid

        eta = square_eta_grid(2.5, 21)
    eta = np.asarray(eta, dtype=complex)
    fs = f_series_for(p, bath)
    coeff = gaussian_generator(p, i, fs, denom_floor=denom_floor)
    chi, dchi_eta, dchi_etab, _, _ = _chi_pieces(p, i, bath, s, eta)
    rhs = (
        (np.conj(coeff.xi) * eta + coeff.zeta * np.conj(eta)) * dchi_eta
        + (coeff.xi * np.conj(eta) + np.conj(coeff.zeta) * eta) * dchi_etab
        + (
            coeff.kappa * np.abs(eta) ** 2
            + np.conj(coeff.mu) * eta**2
            + coeff.mu * np.conj(eta) ** 2
            + np.conj(coeff.sigma) * eta
            - coeff.sigma * np.conj(eta)
        )
        * chi
    )
    if is_gaussian(s):
        lhs = _gaussian_lhs(p, i, fs, s, eta)
    else:
        lhs, _ = chi_time_derivative(p, i, bath, s, eta)
    return float(np.max(np.abs(lhs - rhs)) / np.max(np.abs(chi)))


def _gaussian_lhs(
    p: PropagatorCoefficients, i: int, fs: GaussianFSeries, s: OscillatorState, eta: np.ndarray
) -> np.ndarray:
    """d chi/dt via derivatives of the total Gaussian parameters."""
    d0, a0, g0 = gaussian_chi_params(s)
    a_t, c_t, da_t, dc_t = p.A[i], p.C[i], p.dA[i], p.dC[i]
    d = d0 * a_t + np.conj(d0) * c_t + fs.delta[i]
    a = (
        a0 * (abs(a_t) ** 2 + abs(c_t) ** 2)
        + 4.0 * np.real(g0 * a_t * np.conj(c_t))
        + fs.alpha[i]
    )
    g = a0 * a_t * c_t + g0 * a_t**2 + np.conj(g0) * c_t**2 + fs.gamma[i]
    dd = d0 * da_t + np.conj(d0) * dc_t + fs.ddelta[i]
    da = (
        a0 * 2.0 * np.real(np.conj(a_t) * da_t + np.conj(c_t) * dc_t)
        + 4.0 * np.real(g0 * (da_t * np.conj(c_t) + a_t * np.conj(dc_t)))
        + fs.dalpha[i]
    )
    dg = a0 * (da_t * c_t + a_t * dc_t) + 2.0 * g0 * a_t * da_t + 2.0 * np.conj(g0) * c_t * dc_t + fs.dgamma[i]
    chi = np.exp(
        np.conj(d) * eta
        - d * np.conj(eta)
        - a * np.abs(eta) ** 2
        + np.conj(g) * eta**2
        + g * np.conj(eta) ** 2
    )
    return chi * (
        np.conj(dd) * eta
        - dd * np.conj(eta)
        - da * np.abs(eta) ** 2
        + np.conj(dg) * eta**2
        + dg * np.conj(eta) ** 2
    )


def general_generator_apply(
    p: PropagatorCoefficients,
    i: int,
    bath: BathSpec,
    s: OscillatorState,
    eta,
    *,
    denom_floor: float = DENOM_FLOOR,
) -> tuple[np.ndarray, np.ndarray]:
    """Right side of the general (arbitrary-F) evolution identity on a grid.

    Returns (rhs, ok); nodes where F vanishes are flagged, not fabricated.
    """
    eta = np.asarray(eta, dtype=complex)
    xi, zeta, _ = xi_zeta(p, i, denom_floor=denom_floor)
    chi, dchi_eta, dchi_etab, (_, _, _, _, d_t), ok = _chi_pieces(p, i, bath, s, eta)
    d_eta, d_etab, _, _ = _logF_derivs(p, i, bath, eta)
    rhs = (
        (np.conj(xi) * eta + zeta * np.conj(eta)) * (dchi_eta - chi * d_eta)
        + (xi * np.conj(eta) + np.conj(zeta) * eta) * (dchi_etab - chi * d_etab)
        + chi * d_t
    )
    return rhs, ok


@dataclass
class GeneralResidualReport:
    max_residual: float
    n_flagged: int
    n_nodes: int


def general_generator_residual(
    p: PropagatorCoefficients,
    i: int,
    bath: BathSpec,
    s: OscillatorState,
    eta=None,
    *,
    denom_floor: float = DENOM_FLOOR,
) -> GeneralResidualReport:
    """Residual of the general evolution identity over non-flagged nodes."""
    if eta is None:
        from .observables import square_eta_grid

        eta = square_eta_grid(2.5, 21)
    eta = np.asarray(eta, dtype=complex)
    rhs, ok = general_generator_apply(p, i, bath, s, eta, denom_floor=denom_floor)
    lhs, ok2 = chi_time_derivative(p, i, bath, s, eta)
    ok = ok & ok2
    chi = chi_eval(p, i, bath, s, eta)
    res = np.abs(lhs - rhs)[ok]
    scale = float(np.max(np.abs(chi)))
    return GeneralResidualReport(
        max_residual=float(res.max() / scale) if res.size else math.nan,
        n_flagged=int((~ok).sum()),
        n_nodes=int(eta.size),
    )
