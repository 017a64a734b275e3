"""Model definition: one oscillator linearly coupled to a finite set of bosonic modes.

The Hamiltonian is

    H = hbar nu a^dag a + sum_k hbar omega_k b_k^dag b_k
        + sum_k hbar (u_k a^dag b_k + u_k^* b_k^dag a)
        + sum_k hbar (v_k a^dag b_k^dag + v_k^* b_k a)

with a single oscillator frequency nu > 0, mode frequencies omega_k > 0,
co-rotating couplings u_k and counter-rotating couplings v_k.  A coupling
family restricts (u, v): "RWA" forces v = 0, "PositionPosition" forces
u = v real (pure x-x coupling), "Custom" accepts both sets verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DataError, ParameterError

__all__ = [
    "CouplingFamily",
    "SpectralFamily",
    "Units",
    "SpectralDiscretization",
    "ModelSpec",
    "spectral_density",
    "build_model",
    "dynamical_matrix",
    "quadratic_form_matrix",
    "validate_model",
]


class CouplingFamily(str, Enum):
    RWA = "RWA"
    POSITION_POSITION = "PositionPosition"
    CUSTOM = "Custom"


class SpectralFamily(str, Enum):
    OHMIC_EXP_CUTOFF = "OhmicExpCutoff"
    FLAT_BAND = "FlatBand"
    EXPLICIT = "Explicit"


@dataclass(frozen=True)
class Units:
    """Dimensional constants entering position/momentum observables."""

    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self) -> None:
        if not (self.hbar > 0.0 and np.isfinite(self.hbar)):
            raise ParameterError(f"hbar must be positive and finite, got {self.hbar}")
        if not (self.mass > 0.0 and np.isfinite(self.mass)):
            raise ParameterError(f"mass must be positive and finite, got {self.mass}")


@dataclass
class SpectralDiscretization:
    """Recipe for the bath frequencies and coupling magnitudes.

    For the parametric families the band [omega_min, omega_max] is split into
    N equal cells; omega_k sits at the cell midpoint and |u_k|^2 = J(omega_k)
    * delta_omega, so couplings scale as 1/sqrt(N) at fixed band.  For the
    Explicit family the arrays are supplied verbatim and the band parameters
    are ignored.
    """

    family: SpectralFamily
    strength: float = 0.0
    cutoff: float = 1.0
    omega_min: float = 0.0
    omega_max: float = 1.0
    n_modes: int = 1
    omegas: np.ndarray | None = None
    u: np.ndarray | None = None
    v: np.ndarray | None = None

    def __post_init__(self) -> None:
        self.family = SpectralFamily(self.family)
        if self.family is SpectralFamily.EXPLICIT:
            if self.omegas is None or self.u is None:
                raise ParameterError("Explicit discretization requires omegas and u arrays")
            self.omegas = np.asarray(self.omegas, dtype=float)
            self.u = np.asarray(self.u, dtype=complex)
            if self.v is None:
                self.v = np.zeros_like(self.u)
            self.v = np.asarray(self.v, dtype=complex)
            if not (self.omegas.shape == self.u.shape == self.v.shape):
                raise ParameterError("explicit omegas, u, v must have matching shapes")
            self.n_modes = self.omegas.size
        else:
            if self.n_modes < 1:
                raise ParameterError(f"need at least one bath mode, got N={self.n_modes}")
            if not (self.omega_max > self.omega_min >= 0.0):
                raise ParameterError(
                    f"need omega_max > omega_min >= 0, got [{self.omega_min}, {self.omega_max}]"
                )
            if self.strength < 0.0:
                raise ParameterError(f"strength must be >= 0, got {self.strength}")
            if self.family is SpectralFamily.OHMIC_EXP_CUTOFF and self.cutoff <= 0.0:
                raise ParameterError(f"cutoff must be > 0, got {self.cutoff}")


def spectral_density(disc: SpectralDiscretization, omega: np.ndarray) -> np.ndarray:
    """Evaluate the coupling density J(omega) of a parametric family."""
    omega = np.asarray(omega, dtype=float)
    if disc.family is SpectralFamily.OHMIC_EXP_CUTOFF:
        return disc.strength * omega * np.exp(-omega / disc.cutoff)
    if disc.family is SpectralFamily.FLAT_BAND:
        return np.full_like(omega, disc.strength)
    raise ParameterError("spectral_density is undefined for the Explicit family")


@dataclass
class ModelSpec:
    """A fully assembled model: frequencies, couplings, units, coupling family."""

    nu: float
    omegas: np.ndarray
    u: np.ndarray
    v: np.ndarray
    units: Units = field(default_factory=Units)
    coupling_family: CouplingFamily = CouplingFamily.CUSTOM

    def __post_init__(self) -> None:
        self.coupling_family = CouplingFamily(self.coupling_family)
        self.omegas = np.atleast_1d(np.asarray(self.omegas, dtype=float))
        self.u = np.atleast_1d(np.asarray(self.u, dtype=complex))
        self.v = np.atleast_1d(np.asarray(self.v, dtype=complex))
        if not (self.omegas.shape == self.u.shape == self.v.shape):
            raise ParameterError("omegas, u, v must have matching shapes")
        if self.omegas.ndim != 1 or self.omegas.size < 1:
            raise ParameterError("need a one-dimensional, non-empty mode list")
        for name, arr in (("omegas", self.omegas), ("u", self.u), ("v", self.v)):
            if not np.all(np.isfinite(arr)):
                raise DataError(f"non-finite entries in {name}")
        if not (np.isfinite(self.nu) and self.nu > 0.0):
            raise ParameterError(f"nu must be positive and finite, got {self.nu}")
        if np.any(self.omegas <= 0.0):
            raise ParameterError("all mode frequencies must be positive")
        if self.coupling_family is CouplingFamily.RWA and np.any(self.v != 0.0):
            raise ParameterError("RWA family requires v_k = 0")
        if self.coupling_family is CouplingFamily.POSITION_POSITION:
            if np.any(self.u != self.v) or np.any(self.u.imag != 0.0):
                raise ParameterError("PositionPosition family requires u_k = v_k, both real")

    @property
    def n_modes(self) -> int:
        return self.omegas.size


def build_model(
    disc: SpectralDiscretization,
    nu: float,
    family: CouplingFamily | str,
    units: Units | None = None,
) -> ModelSpec:
    """Assemble a ModelSpec from a discretization recipe.

    Parametric families place omega_k at cell midpoints and set
    u_k = sqrt(J(omega_k) * delta_omega) real; v_k then follows the coupling
    family (0 for RWA, u_k for PositionPosition).  The Custom coupling family
    requires the Explicit discretization, where u and v are given verbatim.
    """
    family = CouplingFamily(family)
    units = units if units is not None else Units()
    if disc.family is SpectralFamily.EXPLICIT:
        omegas = disc.omegas
        u = disc.u
        v = disc.v
        if family is CouplingFamily.RWA:
            v = np.zeros_like(u)
        elif family is CouplingFamily.POSITION_POSITION:
            v = u
    else:
        if family is CouplingFamily.CUSTOM:
            raise ParameterError(
                "Custom coupling family needs explicit u and v arrays; "
                "use the Explicit spectral family"
            )
        delta = (disc.omega_max - disc.omega_min) / disc.n_modes
        omegas = disc.omega_min + (np.arange(disc.n_modes) + 0.5) * delta
        u = np.sqrt(spectral_density(disc, omegas) * delta).astype(complex)
        v = np.zeros_like(u) if family is CouplingFamily.RWA else u
    return ModelSpec(nu=nu, omegas=omegas, u=u, v=v, units=units, coupling_family=family)


def dynamical_matrix(m: ModelSpec) -> np.ndarray:
    """Generator M of the Heisenberg equations d/dt (a, b_k, a^dag, b_k^dag) = M (...).

    Basis ordering: index 0 is a, 1..N are b_k, N+1 is a^dag, N+2..2N+1 are
    b_k^dag.  The daggered block is the elementwise complex conjugate of the
    undaggered one, and M = -Sigma M^dag Sigma with Sigma = diag(+1,...,-1,...).
    """
    n = m.n_modes
    dim = 2 * n + 2
    upper = np.zeros((n + 1, n + 1), dtype=complex)  # rows/cols (a, b_k)
    mixer = np.zeros((n + 1, n + 1), dtype=complex)  # columns (a^dag, b_k^dag)
    upper[0, 0] = -1j * m.nu
    upper[0, 1:] = -1j * m.u
    upper[1:, 0] = -1j * np.conj(m.u)
    upper[np.arange(1, n + 1), np.arange(1, n + 1)] = -1j * m.omegas
    mixer[0, 1:] = -1j * m.v
    mixer[1:, 0] = -1j * m.v
    mat = np.zeros((dim, dim), dtype=complex)
    mat[: n + 1, : n + 1] = upper
    mat[: n + 1, n + 1 :] = mixer
    mat[n + 1 :, n + 1 :] = np.conj(upper)
    mat[n + 1 :, : n + 1] = np.conj(mixer)
    return mat


def quadratic_form_matrix(m: ModelSpec) -> np.ndarray:
    """Hermitian coefficient matrix h of H = w^dag h w, w = (a, b_k, a^dag, b_k^dag).

    Each quadratic monomial is split evenly between its two Hermitian-conjugate
    placements, so the diagonal carries half frequencies; the ground-state
    offset dropped in the splitting is irrelevant to dynamics.  Includes the
    hbar factor.
    """
    n = m.n_modes
    dim = 2 * n + 2
    diag_block = np.zeros((n + 1, n + 1), dtype=complex)  # (a, b) x (a, b)
    cross_block = np.zeros((n + 1, n + 1), dtype=complex)  # (a, b) x (a^dag, b^dag)
    diag_block[0, 0] = m.nu / 2.0
    diag_block[np.arange(1, n + 1), np.arange(1, n + 1)] = m.omegas / 2.0
    diag_block[0, 1:] = m.u / 2.0
    diag_block[1:, 0] = np.conj(m.u) / 2.0
    cross_block[0, 1:] = m.v / 2.0
    cross_block[1:, 0] = m.v / 2.0
    h = np.zeros((dim, dim), dtype=complex)
    h[: n + 1, : n + 1] = diag_block
    h[n + 1 :, n + 1 :] = np.conj(diag_block)
    h[: n + 1, n + 1 :] = cross_block
    h[n + 1 :, : n + 1] = np.conj(cross_block)
    return m.units.hbar * h


def validate_model(m: ModelSpec) -> float:
    """Smallest eigenvalue of the quadratic form; the model is stable iff > 0."""
    h = quadratic_form_matrix(m)
    if not np.all(np.isfinite(h)):
        raise DataError("non-finite entries in the quadratic form matrix")
    return float(np.linalg.eigvalsh(h)[0])
