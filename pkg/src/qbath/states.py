"""Initial oscillator states and their characteristic functions.

Every state exposes chi0(w) = <exp(w a^dag - w^* a)> together with its
Wirtinger derivatives in (w, w^*), and first/second moments of (a, a^dag).
Gaussian states are carried by their moments; a squeezed-displaced pure state
is a special case; cat states (superpositions of two coherent states) are the
non-Gaussian branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, PhysicalityError

__all__ = [
    "GaussianMoments",
    "SqueezedDisplaced",
    "CatState",
    "OscillatorState",
    "is_gaussian",
    "initial_moments",
    "central_moments",
    "gaussian_chi_params",
    "chi0_eval",
    "chi0_wirtinger",
    "coherent_overlap",
    "vacuum_state",
]

_PHYS_TOL = 1e-12


@dataclass
class GaussianMoments:
    """Gaussian state specified by <a>, <a^dag a>, <a a>.

    Construction enforces the single-mode covariance bound
    (n_c + 1/2)^2 >= 1/4 + |c_aa|^2 on the central moments
    n_c = n_ex - |mean_a|^2, c_aa = aa - mean_a^2.
    """

    mean_a: complex = 0.0 + 0.0j
    n_ex: float = 0.0
    aa: complex = 0.0 + 0.0j

    def __post_init__(self) -> None:
        self.mean_a = complex(self.mean_a)
        self.n_ex = float(self.n_ex)
        self.aa = complex(self.aa)
        n_c = self.n_ex - abs(self.mean_a) ** 2
        c_aa = self.aa - self.mean_a**2
        if n_c < -_PHYS_TOL:
            raise PhysicalityError(f"negative central occupation n_c = {n_c:.3e}")
        if (n_c + 0.5) ** 2 + _PHYS_TOL < 0.25 + abs(c_aa) ** 2:
            raise PhysicalityError(
                f"covariance bound violated: (n_c+1/2)^2 = {(n_c + 0.5) ** 2:.6e} "
                f"< 1/4 + |c_aa|^2 = {0.25 + abs(c_aa) ** 2:.6e}"
            )


@dataclass
class SqueezedDisplaced:
    """Pure state D(disp) S(r e^{2 i phi}) |0>."""

    disp: complex = 0.0 + 0.0j
    r: float = 0.0
    phi: float = 0.0

    def __post_init__(self) -> None:
        self.disp = complex(self.disp)
        self.r = float(self.r)
        self.phi = float(self.phi)
        if self.r < 0.0 or not math.isfinite(self.r):
            raise ParameterError(f"squeezing magnitude must be >= 0, got {self.r}")

    def to_gaussian_moments(self) -> GaussianMoments:
        sh, ch = math.sinh(self.r), math.cosh(self.r)
        return GaussianMoments(
            mean_a=self.disp,
            n_ex=abs(self.disp) ** 2 + sh * sh,
            aa=self.disp**2 - np.exp(2j * self.phi) * sh * ch,
        )


@dataclass
class CatState:
    """Normalized superposition (|alpha> + |beta>)/sqrt(2 + 2 Re<alpha|beta>)."""

    alpha: complex
    beta: complex

    def __post_init__(self) -> None:
        self.alpha = complex(self.alpha)
        self.beta = complex(self.beta)
        if self.norm_sq < 1e-12:
            raise ParameterError("cat state norm vanishes (destructive overlap)")

    @property
    def overlap(self) -> complex:
        """<alpha|beta>."""
        return coherent_overlap(self.alpha, self.beta)

    @property
    def norm_sq(self) -> float:
        return 2.0 + 2.0 * float(np.real(self.overlap))


OscillatorState = GaussianMoments | SqueezedDisplaced | CatState


def coherent_overlap(g: complex, d: complex) -> complex:
    """<g|d> = exp(-|g|^2/2 - |d|^2/2 + g^* d)."""
    return complex(np.exp(-0.5 * abs(g) ** 2 - 0.5 * abs(d) ** 2 + np.conj(g) * d))


def vacuum_state() -> GaussianMoments:
    return GaussianMoments(0.0, 0.0, 0.0)


def is_gaussian(s: OscillatorState) -> bool:
    return isinstance(s, (GaussianMoments, SqueezedDisplaced))


def _as_moments(s: OscillatorState) -> GaussianMoments:
    return s.to_gaussian_moments() if isinstance(s, SqueezedDisplaced) else s


def initial_moments(s: OscillatorState) -> tuple[complex, float, complex]:
    """(<a>, <a^dag a>, <a a>) of the initial state."""
    if isinstance(s, CatState):
        ov = s.overlap
        ov_c = np.conj(ov)
        nsq = s.norm_sq
        a, b = s.alpha, s.beta
        mean_a = (a + b + b * ov + a * ov_c) / nsq
        n_ex = (abs(a) ** 2 + abs(b) ** 2 + np.conj(a) * b * ov + np.conj(b) * a * ov_c) / nsq
        aa = (a**2 + b**2 + b**2 * ov + a**2 * ov_c) / nsq
        return complex(mean_a), float(np.real(n_ex)), complex(aa)
    mom = _as_moments(s)
    return mom.mean_a, mom.n_ex, mom.aa


def central_moments(s: OscillatorState) -> tuple[float, complex]:
    """(n_c, c_aa): second moments with the mean subtracted."""
    mean_a, n_ex, aa = initial_moments(s)
    return n_ex - abs(mean_a) ** 2, aa - mean_a**2


def gaussian_chi_params(s: OscillatorState) -> tuple[complex, float, complex]:
    """(d0, a0, g0) with chi0(w) = exp(d0^* w - d0 w^* - a0 |w|^2 + g0^* w^2 + g0 w^*2)."""
    if not is_gaussian(s):
        raise ParameterError("state is not Gaussian")
    mom = _as_moments(s)
    n_c, c_aa = central_moments(mom)
    return mom.mean_a, n_c + 0.5, c_aa / 2.0


def _cat_terms(s: CatState, w: np.ndarray):
    """Yield (prefactor, linear coefficients) of the four displacement overlaps.

    <g|D(w)|d> = <g|d> exp(-|w|^2/2 + g^* w - d w^*), summed over
    (g, d) in {alpha, beta}^2.
    """
    for g in (s.alpha, s.beta):
        for d in (s.alpha, s.beta):
            yield coherent_overlap(g, d), np.conj(g), d


def chi0_eval(s: OscillatorState, w: np.ndarray) -> np.ndarray:
    """chi0 evaluated at an array of complex arguments."""
    w = np.asarray(w, dtype=complex)
    if isinstance(s, CatState):
        total = np.zeros(w.shape, dtype=complex)
        env = -0.5 * np.abs(w) ** 2
        for pref, gc, d in _cat_terms(s, w):
            total += pref * np.exp(env + gc * w - d * np.conj(w))
        return total / s.norm_sq
    d0, a0, g0 = gaussian_chi_params(s)
    return np.exp(
        np.conj(d0) * w
        - d0 * np.conj(w)
        - a0 * np.abs(w) ** 2
        + np.conj(g0) * w**2
        + g0 * np.conj(w) ** 2
    )


def chi0_wirtinger(
    s: OscillatorState, w: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(chi0, d chi0/dw, d chi0/dw^*) treating w and w^* as independent."""
    w = np.asarray(w, dtype=complex)
    if isinstance(s, CatState):
        val = np.zeros(w.shape, dtype=complex)
        dw = np.zeros(w.shape, dtype=complex)
        dwb = np.zeros(w.shape, dtype=complex)
        env = -0.5 * np.abs(w) ** 2
        for pref, gc, d in _cat_terms(s, w):
            term = pref * np.exp(env + gc * w - d * np.conj(w))
            val += term
            dw += term * (gc - 0.5 * np.conj(w))
            dwb += term * (-d - 0.5 * w)
        n = s.norm_sq
        return val / n, dw / n, dwb / n
    d0, a0, g0 = gaussian_chi_params(s)
    val = chi0_eval(s, w)
    dw = val * (np.conj(d0) - a0 * np.conj(w) + 2.0 * np.conj(g0) * w)
    dwb = val * (-d0 - a0 * w + 2.0 * g0 * np.conj(w))
    return val, dw, dwb
