"""Exact direct evolution of the walk in position space.

The full state is kept as a dense array of 2x2 site matrices over the
reachable positions -t..t (parity stride 2); nothing is sampled or
truncated, so distributions and moments are exact up to float64 rounding.
This module is the ground-truth oracle the Fourier-space machinery and the
closed-form moment formulas are checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .walk import KrausPair, WalkParameters, build_kraus


@dataclass(frozen=True)
class DensityState:
    """Walk state at time t: site j holds the 2x2 matrix at x = -t + 2j."""

    t: int
    matrices: np.ndarray  # (t+1, 2, 2) complex

    def __post_init__(self) -> None:
        if self.t < 0:
            raise ValueError("t must be >= 0")
        if self.matrices.shape != (self.t + 1, 2, 2):
            raise ValueError(
                f"expected {(self.t + 1, 2, 2)} site array, got {self.matrices.shape}"
            )
        self.matrices.flags.writeable = False

    @property
    def positions(self) -> np.ndarray:
        return np.arange(-self.t, self.t + 1, 2)

    def site(self, x: int) -> np.ndarray:
        """Site matrix at position x (zero matrix off the reachable parity grid)."""
        if abs(x) > self.t or (x - self.t) % 2 != 0:
            return np.zeros((2, 2), dtype=complex)
        return self.matrices[(x + self.t) // 2]

    @property
    def sites(self) -> dict[int, np.ndarray]:
        return {int(x): self.matrices[j] for j, x in enumerate(self.positions)}

    def total_trace(self) -> float:
        return float(
            math.fsum(np.real(self.matrices[:, 0, 0] + self.matrices[:, 1, 1]))
        )


@dataclass(frozen=True)
class Distribution:
    """Probabilities over positions, aligned ascending with ``positions``."""

    positions: np.ndarray
    probabilities: np.ndarray

    def __post_init__(self) -> None:
        self.positions.flags.writeable = False
        self.probabilities.flags.writeable = False

    def as_dict(self) -> dict[int, float]:
        return {int(x): float(p) for x, p in zip(self.positions, self.probabilities)}

    def total(self) -> float:
        return float(math.fsum(self.probabilities))


@dataclass(frozen=True)
class MomentReport:
    """First and second moments with the derived standard deviation."""

    t: int
    e1: float
    e2: float
    sigma: float

    @classmethod
    def from_raw(cls, t: int, e1: float, e2: float) -> "MomentReport":
        return cls(t=t, e1=e1, e2=e2, sigma=math.sqrt(max(e2 - e1 * e1, 0.0)))


def initial_state(params: WalkParameters) -> DensityState:
    """Localized start: one site at the origin holding diag(p, 1-p)."""
    m = np.zeros((1, 2, 2), dtype=complex)
    m[0, 0, 0] = params.p
    m[0, 1, 1] = 1.0 - params.p
    return DensityState(t=0, matrices=m)


def step(state: DensityState, kraus: KrausPair) -> DensityState:
    """One update: out[x] = P s[x+1] P^T + Q s[x-1] Q^T (missing sites zero)."""
    new = kernels.step_sites(kraus.P, kraus.Q, np.asarray(state.matrices))
    return DensityState(t=state.t + 1, matrices=new)


def evolve(params: WalkParameters, t: int) -> DensityState:
    """State after t updates from the localized initial condition."""
    if t < 0:
        raise ValueError("t must be >= 0")
    kraus = build_kraus(params)
    rho0 = np.array([[params.p, 0.0], [0.0, 1.0 - params.p]], dtype=complex)
    return DensityState(t=t, matrices=kernels.evolve_sites(kraus.P, kraus.Q, rho0, t))


def distribution(state: DensityState) -> Distribution:
    """Site traces as a probability distribution over positions.

    Negative rounding residue above -1e-10 is floored at zero; anything more
    negative is left untouched so the invariant checks can catch it.
    """
    pr = np.real(state.matrices[:, 0, 0] + state.matrices[:, 1, 1]).copy()
    pr[(pr < 0.0) & (pr > -1e-10)] = 0.0
    return Distribution(positions=state.positions, probabilities=pr)


def moments(state: DensityState) -> MomentReport:
    """Exact moments of the position distribution (compensated summation)."""
    x = state.positions.astype(float)
    pr = np.real(state.matrices[:, 0, 0] + state.matrices[:, 1, 1])
    e1 = math.fsum(x * pr)
    e2 = math.fsum(x * x * pr)
    return MomentReport.from_raw(state.t, e1, e2)


def moment_series(params: WalkParameters, t_max: int) -> list[MomentReport]:
    """Moments at every time 0..t_max from a single evolution sweep."""
    if t_max < 0:
        raise ValueError("t_max must be >= 0")
    kraus = build_kraus(params)
    rho0 = np.array([[params.p, 0.0], [0.0, 1.0 - params.p]], dtype=complex)
    e1, e2 = kernels.evolve_moments(kraus.P, kraus.Q, rho0, t_max)
    return [MomentReport.from_raw(t, float(e1[t]), float(e2[t])) for t in range(t_max + 1)]
