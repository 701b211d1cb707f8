"""Two-point-measurement statistics for maps with equilibrium.

For such maps a trajectory is fixed by the initial and final system levels
``(n, m)``, so every distribution follows from the stochastic matrix
``T[m, n] = <m| E(|n><n|) |m>`` and the initial populations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .collision import CollisionSpec, EquilibriumStructure, apply_map
from .config import TOL
from .cycle import charged_populations, passive_populations
from .distribution import DiscreteDistribution
from .errors import DimensionError
from .operators import DensityMatrix


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StochasticMatrix:
    """Column-stochastic matrix, ``T[m, n]`` = probability of ``n -> m``."""

    T: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.T, dtype=float)
        if t.ndim != 2 or t.shape[0] != t.shape[1]:
            raise DimensionError("stochastic matrix shape", "(N, N)", t.shape)
        lo, hi = -TOL.stochastic_entry, 1 + TOL.stochastic_entry
        if np.any(t < lo) or np.any(t > hi):
            raise ValueError(f"entries outside [0, 1]: min {t.min():.3e}, max {t.max():.3e}")
        dev = np.max(np.abs(t.sum(axis=0) - 1))
        if dev > TOL.column_sum:
            raise ValueError(f"columns do not sum to 1 (deviation {dev:.3e})")
        object.__setattr__(self, "T", _frozen(np.clip(t, 0.0, 1.0)))

    @property
    def N(self) -> int:
        return self.T.shape[0]

    def power(self, L: int) -> np.ndarray:
        return np.linalg.matrix_power(self.T, L)


@dataclass(frozen=True, eq=False)
class TrajectoryTable:
    """``P[n, m]`` = probability of the trajectory ``n -> m``; ``p_ini`` its row sums."""

    P: np.ndarray
    p_ini: np.ndarray

    def __post_init__(self):
        P = _frozen(self.P)
        p = _frozen(self.p_ini)
        if P.shape != (len(p), len(p)):
            raise DimensionError("trajectory table shape", (len(p), len(p)), P.shape)
        if abs(P.sum() - 1) > TOL.prob_sum:
            raise ValueError(f"table sums to {P.sum()!r}")
        dev = np.max(np.abs(P.sum(axis=1) - p))
        if dev > TOL.prob_sum:
            raise ValueError(f"row sums differ from p_ini by {dev:.3e}")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "p_ini", p)

    @property
    def N(self) -> int:
        return len(self.p_ini)

    def __getitem__(self, nm) -> float:
        return float(self.P[nm])


def transition_matrix(spec: CollisionSpec, es: EquilibriumStructure) -> StochasticMatrix:
    T = np.empty((es.N, es.N))
    for n in range(es.N):
        out = apply_map(spec, DensityMatrix.from_array(es.projector(n))).matrix
        T[:, n] = np.real(np.einsum("im,ij,jm->m", es.basis.conj(), out, es.basis))
    return StochasticMatrix(T)


def _check_probability_vector(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if np.any(p < -TOL.stochastic_entry) or abs(p.sum() - 1) > TOL.prob_sum:
        raise ValueError("p_ini must be a probability vector")
    return p


def trajectory_table(T: StochasticMatrix, p_ini, L: int) -> TrajectoryTable:
    if L < 0:
        raise ValueError("L must be non-negative")
    p = _check_probability_vector(p_ini)
    if len(p) != T.N:
        raise DimensionError("p_ini length", T.N, len(p))
    return TrajectoryTable(T.power(L).T * p[:, None], p)


def equilibrium_populations(es: EquilibriumStructure, beta: float) -> np.ndarray:
    """Initial populations for fluctuations in the charged equilibrium state."""
    return charged_populations(es, beta)


# re-exported: initial populations for the recharging process
passive_populations = passive_populations


def stationary_table(es: EquilibriumStructure, beta: float) -> TrajectoryTable:
    """Infinite-``L`` recharging table ``exp(-beta (E0[perm[n]] + E0[m])) / Z_0**2``."""
    final = charged_populations(es, beta)
    p = final[es.perm]
    return TrajectoryTable(np.outer(p, final), p)


class TrajectoryValues(NamedTuple):
    energy: np.ndarray
    heat: np.ndarray
    work: np.ndarray


def trajectory_values(E, E0) -> TrajectoryValues:
    """Energy change, heat and work on the ``(n, m)`` grid, indexed ``[n, m]``.

    Work is defined through the first law, ``w = de - q``.
    """
    E = np.asarray(E)
    E0 = np.asarray(E0)
    de = E[None, :] - E[:, None]
    q = E0[None, :] - E0[:, None]
    return TrajectoryValues(de, q, de - q)


class EnergyWorkHeat(NamedTuple):
    energy: DiscreteDistribution
    work: DiscreteDistribution
    heat: DiscreteDistribution


def energy_work_heat_distributions(table: TrajectoryTable, es: EquilibriumStructure) -> EnergyWorkHeat:
    if table.N != es.N:
        raise DimensionError("table dimension", es.N, table.N)
    v = trajectory_values(es.E, es.E0)
    P = table.P
    return EnergyWorkHeat(
        DiscreteDistribution.from_samples(v.energy, P),
        DiscreteDistribution.from_samples(v.work, P),
        DiscreteDistribution.from_samples(v.heat, P),
    )


# (n, m) pairs, 0-based, for the two-qubit battery level labels 1..4.
# Index 0 collects zero work/heat and therefore includes the diagonal n -> n.
_DIAG = [(0, 0), (1, 1), (2, 2), (3, 3)]
_A_PAIRS = [
    [(1, 2), (2, 1)] + _DIAG,
    [(0, 3)],
    [(3, 0)],
    [(0, 1), (0, 2), (1, 3), (2, 3)],
    [(1, 0), (2, 0), (3, 1), (3, 2)],
]
_B_PAIRS = [
    [(0, 3), (3, 0)] + _DIAG,
    [(2, 1)],
    [(1, 2)],
    [(0, 1), (2, 0), (3, 1), (2, 3)],
    [(1, 0), (0, 2), (1, 3), (3, 2)],
]


class Coefficients2Q(NamedTuple):
    A: np.ndarray
    B: np.ndarray

    def work(self, J: float) -> float:
        A = self.A
        return 2 * J * (A[3] - A[4]) + 4 * J * (A[1] - A[2])

    def heat(self, h: float) -> float:
        B = self.B
        return h * (B[4] - B[3]) + 2 * h * (B[2] - B[1])


def heat_work_coefficients_2q(table: TrajectoryTable) -> Coefficients2Q:
    """Weights of the two-qubit work atoms ``(0, 4J, -4J, 2J, -2J)`` (``A``)
    and heat atoms ``(0, -2h, 2h, -h, h)`` (``B``)."""
    if table.N != 4:
        raise DimensionError("two-qubit table dimension", 4, table.N)
    P = table.P
    A = np.array([sum(P[nm] for nm in pairs) for pairs in _A_PAIRS])
    B = np.array([sum(P[nm] for nm in pairs) for pairs in _B_PAIRS])
    return Coefficients2Q(A, B)


def _zero_work_mask(es: EquilibriumStructure, work: np.ndarray) -> np.ndarray:
    return np.abs(work) < TOL.zero_work_rel * es.energy_scale


def efficiency_distribution(es: EquilibriumStructure, beta: float) -> DiscreteDistribution:
    """Fluctuating efficiency of the full cycle: extracted energy over recharging work."""
    table = stationary_table(es, beta)
    work = trajectory_values(es.E, es.E0).work
    extracted = (es.E[es.perm] - es.E)[:, None] * np.ones_like(work)
    infinite = _zero_work_mask(es, work)
    eta = np.divide(extracted, work, out=np.zeros_like(work), where=~infinite)
    return DiscreteDistribution.from_samples(eta, table.P, infinite)


def efficiency_work_correlation(es: EquilibriumStructure, beta: float) -> float:
    """``<eta w>`` over the cycle; zero-work trajectories contribute their extracted energy."""
    table = stationary_table(es, beta)
    work = trajectory_values(es.E, es.E0).work
    extracted = (es.E[es.perm] - es.E)[:, None] * np.ones_like(work)
    infinite = _zero_work_mask(es, work)
    eta = np.divide(extracted, work, out=np.zeros_like(work), where=~infinite)
    finite = np.sum((eta * work * table.P)[~infinite])
    boundary = np.sum((extracted * table.P)[infinite])
    return float(finite + boundary)


def extraction_statistics(es: EquilibriumStructure, beta: float) -> DiscreteDistribution:
    """Distribution of the extracted energy ``E[perm[n]] - E[n]`` under the extraction permutation."""
    return DiscreteDistribution.from_samples(es.E[es.perm] - es.E, passive_populations(es, beta))


def check_detailed_balance(T: StochasticMatrix, es: EquilibriumStructure, beta: float) -> float:
    w = charged_populations(es, beta)
    flux = T.T * w[None, :]
    return float(np.max(np.abs(flux - flux.T)))


class Regularity(NamedTuple):
    regular: bool
    second_eigenvalue_modulus: float


def is_regular(T: StochasticMatrix) -> Regularity:
    N = T.N
    regular = bool(np.all(T.power(N * N) > TOL.regular_entry))
    mods = np.sort(np.abs(np.linalg.eigvals(T.T)))[::-1]
    return Regularity(regular, float(mods[1]) if N > 1 else 0.0)
