"""Heisenberg-picture propagator coefficients on a time grid.

The annihilation operator evolves linearly,

    a(t) = A(t) a + sum_k B_k(t) b_k + C(t) a^dag + sum_k D_k(t) b_k^dag,

so the coefficient row is the a-row of exp(M t) with M the dynamical matrix.
Preserving [a(t), a(t)^dag] = 1 gives the sum rule

    |A|^2 - |C|^2 + sum_k |B_k|^2 - sum_k |D_k|^2 = 1.

Coefficients are computed by eigendecomposition of M (exact in t, no time
stepping); time derivatives are exact rows of row(t) . M.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ParameterError
from .model import CouplingFamily, ModelSpec, dynamical_matrix, validate_model

__all__ = [
    "TimeGrid",
    "PropagatorCoefficients",
    "DecayReport",
    "compute_propagator",
    "sum_rule_defect",
    "sum_rule_defects",
    "decay_report",
    "plateau_window",
]


@dataclass
class TimeGrid:
    """Strictly increasing times starting at 0."""

    t: np.ndarray

    def __post_init__(self) -> None:
        self.t = np.atleast_1d(np.asarray(self.t, dtype=float))
        if self.t.size < 1 or self.t[0] != 0.0:
            raise ParameterError("time grid must start at t = 0")
        if np.any(np.diff(self.t) <= 0.0):
            raise ParameterError("time grid must be strictly increasing")
        if not np.all(np.isfinite(self.t)):
            raise ParameterError("non-finite entries in time grid")

    @classmethod
    def linspace(cls, t_max: float, steps: int) -> "TimeGrid":
        """Uniform grid with `steps` intervals on [0, t_max]."""
        if not (t_max > 0.0 and steps >= 1):
            raise ParameterError("need t_max > 0 and steps >= 1")
        return cls(np.linspace(0.0, t_max, steps + 1))

    def __len__(self) -> int:
        return self.t.size


@dataclass
class PropagatorCoefficients:
    """Coefficient rows A, B_k, C, D_k and their exact time derivatives.

    Shapes: A, C, dA, dC are (T,); B, D, dB, dD are (T, N).
    """

    model: ModelSpec
    grid: TimeGrid
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    dA: np.ndarray
    dB: np.ndarray
    dC: np.ndarray
    dD: np.ndarray

    @property
    def n_times(self) -> int:
        return self.A.size

    @property
    def n_modes(self) -> int:
        return self.B.shape[1]


def compute_propagator(
    m: ModelSpec,
    grid: TimeGrid,
    *,
    require_stable: bool = True,
    cond_limit: float = 1e10,
) -> PropagatorCoefficients:
    """Evaluate the coefficient row and its derivative on the whole grid.

    The dynamical matrix is eigendecomposed once; rows follow from
    row(t) = e_a^T V exp(diag(lambda) t) V^{-1} and drow(t) = row(t) M.
    """
    if require_stable:
        bound = validate_model(m)
        if bound <= 0.0:
            raise ParameterError(
                f"model is not stable: smallest quadratic-form eigenvalue {bound:.3e} <= 0"
            )
    mat = dynamical_matrix(m)
    lam, vecs = np.linalg.eig(mat)
    cond = np.linalg.cond(vecs)
    if not np.isfinite(cond) or cond > cond_limit:
        raise NumericalError(
            f"ill-conditioned eigenvector matrix (cond = {cond:.3e} > {cond_limit:.1e})"
        )
    inv = np.linalg.inv(vecs)
    weights = vecs[0, :]  # a-row of V
    phases = np.exp(np.multiply.outer(grid.t, lam))  # (T, dim)
    rows = (phases * weights) @ inv  # (T, dim)
    drows = rows @ mat
    # t = 0 is the identity exactly; drop the reconstruction rounding there
    rows[0, :] = 0.0
    rows[0, 0] = 1.0
    drows[0, :] = mat[0, :]
    n = m.n_modes
    return PropagatorCoefficients(
        model=m,
        grid=grid,
        A=rows[:, 0].copy(),
        B=rows[:, 1 : n + 1].copy(),
        C=rows[:, n + 1].copy(),
        D=rows[:, n + 2 :].copy(),
        dA=drows[:, 0].copy(),
        dB=drows[:, 1 : n + 1].copy(),
        dC=drows[:, n + 1].copy(),
        dD=drows[:, n + 2 :].copy(),
    )


def sum_rule_defects(p: PropagatorCoefficients) -> np.ndarray:
    """|A|^2 - |C|^2 + sum|B_k|^2 - sum|D_k|^2 - 1 at every grid point."""
    return (
        np.abs(p.A) ** 2
        - np.abs(p.C) ** 2
        + np.sum(np.abs(p.B) ** 2, axis=1)
        - np.sum(np.abs(p.D) ** 2, axis=1)
        - 1.0
    )


def sum_rule_defect(p: PropagatorCoefficients, i: int) -> float:
    """Sum-rule defect at grid index i."""
    return float(sum_rule_defects(p)[i])


@dataclass
class DecayReport:
    """Late-window coefficient magnitudes and a recurrence-onset estimate."""

    late_sup_A: float
    late_sup_C: float
    recurrence_onset: float | None
    threshold: float


def _local_maxima(y: np.ndarray) -> np.ndarray:
    """Indices of strict interior local maxima, plus the final point if rising."""
    idx = []
    for i in range(1, y.size - 1):
        if y[i] >= y[i - 1] and y[i] > y[i + 1]:
            idx.append(i)
    if y.size >= 2 and y[-1] > y[-2]:
        idx.append(y.size - 1)
    return np.asarray(idx, dtype=int)


def decay_report(
    p: PropagatorCoefficients,
    *,
    threshold: float = 0.1,
    late_fraction: float = 0.2,
) -> DecayReport:
    """Summarize coefficient decay over the grid.

    The late window is the trailing `late_fraction` of the grid.  The
    recurrence onset is the first local maximum of |A| at or above the
    threshold after |A| first drops below it; None when |A| never drops
    below the threshold or never comes back up.
    """
    abs_a = np.abs(p.A)
    abs_c = np.abs(p.C)
    start = int(np.floor((1.0 - late_fraction) * (abs_a.size - 1)))
    report = DecayReport(
        late_sup_A=float(abs_a[start:].max()),
        late_sup_C=float(abs_c[start:].max()),
        recurrence_onset=None,
        threshold=threshold,
    )
    below = np.nonzero(abs_a < threshold)[0]
    if below.size == 0:
        return report
    first_dip = below[0]
    maxima = _local_maxima(abs_a)
    maxima = maxima[(maxima > first_dip) & (abs_a[maxima] >= threshold)]
    if maxima.size:
        report.recurrence_onset = float(p.grid.t[maxima[0]])
    return report


def plateau_window(
    p: PropagatorCoefficients,
    *,
    threshold: float = 0.05,
) -> tuple[int, int]:
    """Index range [i0, i1] where initial-state memory has decayed.

    The window is the longest contiguous run of grid points with both |A| and
    |C| below `threshold`; it ends where a recurrence (or the grid) begins.
    Raises if no such run exists.
    """
    below = np.maximum(np.abs(p.A), np.abs(p.C)) < threshold
    if not below.any():
        raise NumericalError(
            f"no plateau: |A|, |C| never drop below {threshold} on this grid"
        )
    edges = np.diff(below.astype(int))
    starts = list(np.nonzero(edges == 1)[0] + 1)
    ends = list(np.nonzero(edges == -1)[0])
    if below[0]:
        starts.insert(0, 0)
    if below[-1]:
        ends.append(below.size - 1)
    lengths = [e - s for s, e in zip(starts, ends)]
    best = int(np.argmax(lengths))
    return int(starts[best]), int(ends[best])


def is_rwa(m: ModelSpec) -> bool:
    return m.coupling_family is CouplingFamily.RWA
