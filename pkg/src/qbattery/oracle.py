"""Brute-force two-point-measurement statistics on the full composite space.

The system and ``L`` ancillas are measured in their energy bases, evolved by
the sequence of pairwise collision unitaries and measured again.  Nothing
here relies on the reduced (stochastic-matrix) description; it is the
reference the reduction is checked against.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .collision import CollisionSpec, EquilibriumStructure
from .distribution import DiscreteDistribution
from .errors import DimensionError, OracleSizeError
from .operators import herm_eig

MAX_COMPOSITE_DIM = 256
AMPLITUDE_CUTOFF = 1e-14
SUPPORT_PROB = 1e-12
MERGE_REL = 1e-9


@dataclass(frozen=True)
class CompositeTrajectory:
    n: int
    m: int
    i: tuple[int, ...]
    j: tuple[int, ...]
    prob: float
    q: float
    de: float
    w: float


def _composite_amplitudes(U_energy: np.ndarray, N: int, d: int, L: int) -> np.ndarray:
    """``<m j_1..j_L| U_L...U_1 |n i_1..i_L>`` as a ``(D, D)`` matrix, factor order (S, B_1..B_L)."""
    D = N * d ** L
    u = U_energy.reshape(N, d, N, d)
    state = np.eye(D, dtype=complex).reshape((N,) + (d,) * L + (D,))
    for k in range(1, L + 1):
        # contract the gate's input legs with (system, ancilla k)
        state = np.tensordot(u, state, axes=([2, 3], [0, k]))
        state = np.moveaxis(state, 1, k)
    return state.reshape(D, D)


def enumerate_trajectories(spec: CollisionSpec, p_ini, L: int, system_basis=None) -> list[CompositeTrajectory]:
    N, d = spec.N, spec.d
    if L < 0:
        raise ValueError("L must be non-negative")
    D = N * d ** L
    if D > MAX_COMPOSITE_DIM:
        raise OracleSizeError(f"composite dimension N*d^L = {D} exceeds the cap of {MAX_COMPOSITE_DIM}")
    p_ini = np.asarray(p_ini, dtype=float)
    if p_ini.shape != (N,):
        raise DimensionError("p_ini length", N, p_ini.shape)

    if system_basis is None:
        sys_eig = herm_eig(spec.H_S)
        E, Ws = sys_eig.values, sys_eig.vectors
    else:
        Ws = np.asarray(system_basis, dtype=complex)
        E = np.real(np.einsum("ij,ik,kj->j", Ws.conj(), spec.H_S.matrix, Ws))
    bath_eig = herm_eig(spec.H_B)
    eps, Wb = bath_eig.values, bath_eig.vectors
    x = -spec.beta * eps
    gibbs = np.exp(x - x.max())
    gibbs /= gibbs.sum()

    W = np.kron(Ws, Wb)
    U_energy = W.conj().T @ spec.unitary.matrix @ W
    amp = _composite_amplitudes(U_energy, N, d, L)

    shape = (N,) + (d,) * L
    labels = [np.unravel_index(k, shape) for k in range(D)]
    weight = np.empty(D)
    for k, lab in enumerate(labels):
        weight[k] = p_ini[lab[0]] * np.prod([gibbs[i] for i in lab[1:]])

    out = []
    for col in range(D):
        if weight[col] == 0:
            continue
        n, *i = labels[col]
        for row in np.flatnonzero(np.abs(amp[:, col]) > AMPLITUDE_CUTOFF):
            m, *j = labels[row]
            prob = float(abs(amp[row, col]) ** 2 * weight[col])
            q = float(sum(eps[a] - eps[b] for a, b in zip(i, j)))
            de = float(E[m] - E[n])
            out.append(CompositeTrajectory(int(n), int(m), tuple(map(int, i)), tuple(map(int, j)), prob, q, de, de - q))
    return out


def _aggregate(values, probs) -> DiscreteDistribution:
    pairs = sorted(zip(values, probs))
    scale = max((abs(v) for v in values), default=0.0) or 1.0
    atoms: list[list[float]] = []
    for v, p in pairs:
        if atoms and v - atoms[-1][2] <= MERGE_REL * scale:
            atoms[-1][0] += v * p
            atoms[-1][1] += p
            atoms[-1][2] = v
        else:
            atoms.append([v * p, p, v])
    merged = tuple((vp / p if p > 0 else last, p) for vp, p, last in atoms)
    total = sum(p for _, p in merged)
    # pruned amplitudes leave a deficit far below the validation tolerance
    return DiscreteDistribution(tuple((v, p / total) for v, p in merged))


class OracleDistributions(NamedTuple):
    energy: DiscreteDistribution
    work: DiscreteDistribution
    heat: DiscreteDistribution


def oracle_distributions(trajectories) -> OracleDistributions:
    probs = [t.prob for t in trajectories]
    return OracleDistributions(
        _aggregate([t.de for t in trajectories], probs),
        _aggregate([t.w for t in trajectories], probs),
        _aggregate([t.q for t in trajectories], probs),
    )


def marginal_table(trajectories, N: int) -> np.ndarray:
    """Sum over ancilla outcomes: ``P[n, m]``."""
    P = np.zeros((N, N))
    for t in trajectories:
        P[t.n, t.m] += t.prob
    return P


@dataclass(frozen=True)
class ReductionReport:
    heat_discrepancy: float
    marginal_discrepancy: float
    worst_trajectory: Optional[CompositeTrajectory]

    @property
    def discrepancy(self) -> float:
        return max(self.heat_discrepancy, self.marginal_discrepancy)


def verify_reduction(spec: CollisionSpec, es: EquilibriumStructure, L: int, p_ini=None) -> ReductionReport:
    """Compare composite-space trajectories with the two-level-label reduction.

    Checks that every supported trajectory carries heat ``E0[m] - E0[n]`` and that
    summing over ancilla outcomes gives ``(T^L)[m, n] p_ini[n]``.
    """
    from .stats import transition_matrix

    if p_ini is None:
        x = -spec.beta * es.E0
        w = np.exp(x - x.max())
        p_ini = (w / w.sum())[es.perm]
    p_ini = np.asarray(p_ini, dtype=float)
    trajs = enumerate_trajectories(spec, p_ini, L, es.basis)

    heat_err, worst = 0.0, None
    for t in trajs:
        if t.prob <= SUPPORT_PROB:
            continue
        err = abs(t.q - (es.E0[t.m] - es.E0[t.n]))
        if err > heat_err:
            heat_err, worst = err, t

    T = transition_matrix(spec, es).T
    reduced = np.linalg.matrix_power(T, L).T * p_ini[:, None]
    marginal_err = float(np.max(np.abs(marginal_table(trajs, es.N) - reduced)))
    return ReductionReport(heat_err, marginal_err, worst)
