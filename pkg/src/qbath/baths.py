"""Bath preparations and their influence on the oscillator characteristic function.

The reduced characteristic function factorizes as chi(eta, t) =
chi0(eta A^* - eta^* C) F(eta, t) where F collects the bath influence.  For
the three supported preparations:

  equilibrium (inverse temperature beta):
      F = exp(-alpha |eta|^2 + gamma^* eta^2 + gamma eta^*2),
      alpha = sum_k (|B_k|^2 + |D_k|^2)(nbar_k + 1/2),
      gamma = sum_k B_k D_k (nbar_k + 1/2)

  number states (occupations n_k):
      F = exp(zero-temperature Gaussian) prod_k L_{n_k}(|eta B_k^* - eta^* D_k|^2)

  coherent states (amplitudes beta_k):
      F = exp(delta^* eta - delta eta^*) exp(zero-temperature Gaussian),
      delta = sum_k (B_k beta_k + D_k beta_k^*)

beta = +inf is the zero-temperature sentinel.  Random preparations are drawn
from the diagonal weights of the equilibrium state: geometric occupation
numbers (P_n) or complex Gaussian amplitudes with E|beta_k|^2 = nbar_k (P_c).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import laguerre
from .errors import DataError, ParameterError
from .model import ModelSpec
from .propagator import PropagatorCoefficients

__all__ = [
    "EquilibriumBath",
    "NumberStateBath",
    "CoherentStateBath",
    "GaussianFParams",
    "NoiseCorrelation",
    "occupation",
    "equilibrium_F_params",
    "number_F_eval",
    "coherent_F_params",
    "gaussian_F_eval",
    "bath_F_eval",
    "bath_f_params",
    "second_moment_sums",
    "member_rng",
    "sample_number_state",
    "sample_coherent_state",
    "delta_correlations",
]


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if math.isnan(beta) or beta <= 0.0:
        raise ParameterError(f"inverse temperature must be positive (or +inf), got {beta}")
    return beta


@dataclass
class EquilibriumBath:
    """Thermal bath at inverse temperature beta (beta = inf for the vacuum)."""

    beta: float

    def __post_init__(self) -> None:
        self.beta = _check_beta(self.beta)


@dataclass
class NumberStateBath:
    """Product of number states with one occupation per mode."""

    n: np.ndarray

    def __post_init__(self) -> None:
        self.n = np.atleast_1d(np.asarray(self.n))
        if not np.issubdtype(self.n.dtype, np.integer):
            as_int = self.n.astype(int)
            if np.any(as_int != self.n):
                raise ParameterError("occupation numbers must be integers")
            self.n = as_int
        if np.any(self.n < 0):
            raise ParameterError("occupation numbers must be >= 0")


@dataclass
class CoherentStateBath:
    """Product of coherent states with one complex amplitude per mode."""

    amps: np.ndarray

    def __post_init__(self) -> None:
        self.amps = np.atleast_1d(np.asarray(self.amps, dtype=complex))
        if not np.all(np.isfinite(self.amps)):
            raise DataError("non-finite coherent amplitudes")


BathSpec = EquilibriumBath | NumberStateBath | CoherentStateBath


@dataclass
class GaussianFParams:
    """Parameters of a Gaussian influence function.

    F(eta) = exp(delta^* eta - delta eta^* - alpha |eta|^2
                 + gamma^* eta^2 + gamma eta^*2)
    """

    delta: complex
    alpha: float
    gamma: complex


def occupation(beta: float, omega, hbar: float = 1.0) -> np.ndarray:
    """Mean thermal occupation 1/(exp(beta hbar omega) - 1); 0 at beta = inf."""
    beta = _check_beta(beta)
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0.0):
        raise ParameterError("occupation needs omega > 0")
    if math.isinf(beta):
        return np.zeros_like(omega)
    x = beta * hbar * omega
    out = np.empty_like(x)
    large = x > 700.0
    out[large] = np.exp(-x[large])
    out[~large] = 1.0 / np.expm1(x[~large])
    return out


def _mode_row(p: PropagatorCoefficients, i: int) -> tuple[np.ndarray, np.ndarray]:
    return p.B[i], p.D[i]


def second_moment_sums(
    p: PropagatorCoefficients, i: int, weights: np.ndarray
) -> tuple[float, complex]:
    """alpha-like and gamma-like sums with per-mode weights (n_k + 1/2)."""
    b, d = _mode_row(p, i)
    alpha = float(np.sum((np.abs(b) ** 2 + np.abs(d) ** 2) * weights))
    gamma = complex(np.sum(b * d * weights))
    return alpha, gamma


def equilibrium_F_params(p: PropagatorCoefficients, i: int, beta: float) -> GaussianFParams:
    """Gaussian influence parameters of the thermal preparation at index i."""
    nbar = occupation(beta, p.model.omegas, p.model.units.hbar)
    alpha, gamma = second_moment_sums(p, i, nbar + 0.5)
    return GaussianFParams(delta=0.0 + 0.0j, alpha=alpha, gamma=gamma)


def coherent_F_params(p: PropagatorCoefficients, i: int, amps: np.ndarray) -> GaussianFParams:
    """Gaussian influence parameters of a coherent-product preparation at index i."""
    amps = np.atleast_1d(np.asarray(amps, dtype=complex))
    b, d = _mode_row(p, i)
    if amps.shape != b.shape:
        raise ParameterError(f"expected {b.size} amplitudes, got {amps.size}")
    alpha, gamma = second_moment_sums(p, i, np.full(b.shape, 0.5))
    delta = complex(np.sum(b * amps + d * np.conj(amps)))
    return GaussianFParams(delta=delta, alpha=alpha, gamma=gamma)


def gaussian_F_eval(params: GaussianFParams, eta: np.ndarray) -> np.ndarray:
    """Evaluate a Gaussian influence function on an array of eta values."""
    eta = np.asarray(eta, dtype=complex)
    d, a, g = params.delta, params.alpha, params.gamma
    return np.exp(
        np.conj(d) * eta
        - d * np.conj(eta)
        - a * np.abs(eta) ** 2
        + np.conj(g) * eta**2
        + g * np.conj(eta) ** 2
    )


def number_F_eval(
    p: PropagatorCoefficients, i: int, n: np.ndarray, eta: np.ndarray
) -> np.ndarray:
    """Influence function of a number-state preparation (real-valued).

    Each mode contributes L_{n_k}(|eta B_k^* - eta^* D_k|^2) on top of the
    zero-temperature Gaussian; Laguerre factors use the guarded upward
    recurrence and are combined in scaled form to avoid overflow.
    """
    bath = NumberStateBath(n)
    eta = np.asarray(eta, dtype=complex)
    b, d = _mode_row(p, i)
    if bath.n.shape != b.shape:
        raise ParameterError(f"expected {b.size} occupations, got {bath.n.size}")
    zero_t = equilibrium_F_params(p, i, math.inf)
    log_env = (
        -zero_t.alpha * np.abs(eta) ** 2 + 2.0 * np.real(zero_t.gamma * np.conj(eta) ** 2)
    )
    mant = np.ones(eta.shape, dtype=float)
    exp2 = np.zeros(eta.shape, dtype=float)
    for k in np.nonzero(bath.n)[0]:
        x = np.abs(eta * np.conj(b[k]) - np.conj(eta) * d[k]) ** 2
        mk, _, ek = laguerre.eval_scaled(int(bath.n[k]), x)
        mant *= mk
        exp2 += ek
        frac, ex = np.frexp(mant)
        mant = frac
        exp2 += ex
    sign = np.sign(mant)
    with np.errstate(divide="ignore"):
        logmag = np.log(np.abs(mant))
    out = sign * np.exp(log_env + logmag + exp2 * math.log(2.0))
    return np.where(mant == 0.0, 0.0, out)


def bath_f_params(p: PropagatorCoefficients, i: int, bath: BathSpec) -> GaussianFParams:
    """Gaussian influence parameters; rejects number-state baths."""
    if isinstance(bath, EquilibriumBath):
        return equilibrium_F_params(p, i, bath.beta)
    if isinstance(bath, CoherentStateBath):
        return coherent_F_params(p, i, bath.amps)
    raise ParameterError("number-state baths have no Gaussian influence parameters")


def bath_F_eval(p: PropagatorCoefficients, i: int, bath: BathSpec, eta: np.ndarray) -> np.ndarray:
    """Influence function F(eta, t_i) for any supported preparation."""
    if isinstance(bath, NumberStateBath):
        return number_F_eval(p, i, bath.n, eta)
    return gaussian_F_eval(bath_f_params(p, i, bath), eta)


def member_rng(seed: int, index: int) -> np.random.Generator:
    """Independent, reproducible stream for ensemble member `index`."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def sample_number_state(
    beta: float, m: ModelSpec, rng: np.random.Generator | int
) -> NumberStateBath:
    """Draw occupations from the equilibrium diagonal weights P(n) = (1-q) q^n."""
    beta = _check_beta(beta)
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    if math.isinf(beta):
        return NumberStateBath(np.zeros(m.n_modes, dtype=int))
    q = np.exp(-beta * m.units.hbar * m.omegas)
    # numpy's geometric counts trials starting at 1
    draws = rng.geometric(p=1.0 - q) - 1
    return NumberStateBath(draws)


def sample_coherent_state(
    beta: float, m: ModelSpec, rng: np.random.Generator | int
) -> CoherentStateBath:
    """Draw amplitudes from the complex Gaussian with E|beta_k|^2 = nbar_k."""
    beta = _check_beta(beta)
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    nbar = occupation(beta, m.omegas, m.units.hbar)
    scale = np.sqrt(nbar / 2.0)
    amps = rng.normal(scale=1.0, size=m.n_modes) * scale + 1j * (
        rng.normal(scale=1.0, size=m.n_modes) * scale
    )
    return CoherentStateBath(amps)


@dataclass
class NoiseCorrelation:
    """Two-time correlators of the coherent-ensemble drift delta(t)."""

    c1: complex  # E[delta(t_i) delta^*(t_j)]
    c2: complex  # E[delta(t_i) delta(t_j)]


def delta_correlations(
    p: PropagatorCoefficients, i: int, j: int, beta: float
) -> NoiseCorrelation:
    """Correlators of delta(t) = sum_k (B_k beta_k + D_k beta_k^*) under P_c."""
    nbar = occupation(beta, p.model.omegas, p.model.units.hbar)
    bi, di = _mode_row(p, i)
    bj, dj = _mode_row(p, j)
    c1 = complex(np.sum((bi * np.conj(bj) + di * np.conj(dj)) * nbar))
    c2 = complex(np.sum((bi * dj + bj * di) * nbar))
    return NoiseCorrelation(c1=c1, c2=c2)
