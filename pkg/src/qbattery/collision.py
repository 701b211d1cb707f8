"""A single collision with a fresh thermal ancilla and its thermodynamics."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .config import TOL
from .errors import DegenerateSpectrumError, DimensionError, EquilibriumError, StructureError
from .operators import (
    DensityMatrix,
    HermitianOperator,
    UnitaryOperator,
    as_matrix,
    commutator,
    gibbs_state,
    herm_eig,
    log_gibbs,
    max_abs,
    partial_trace_array,
    relative_entropy,
    tensor,
    trace_distance,
    unitary_from_hamiltonian,
    von_neumann_entropy,
)


def _herm(op) -> HermitianOperator:
    return op if isinstance(op, HermitianOperator) else HermitianOperator(op)


@dataclass(frozen=True)
class CollisionSpec:
    """System Hamiltonian ``H_S`` (dim N), ancilla Hamiltonian ``H_B`` (dim d),
    coupling ``V`` on the N*d product space (system factor first), collision
    time ``tau``, ``hbar`` and the ancilla inverse temperature ``beta``."""

    H_S: HermitianOperator
    H_B: HermitianOperator
    V: HermitianOperator
    tau: float
    beta: float
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("H_S", "H_B", "V"):
            object.__setattr__(self, name, _herm(getattr(self, name)))
        if self.V.dim != self.N * self.d:
            raise DimensionError("coupling dimension N*d", self.N * self.d, self.V.dim)
        if self.tau < 0:
            raise ValueError("tau must be non-negative")
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")

    @property
    def N(self) -> int:
        return self.H_S.dim

    @property
    def d(self) -> int:
        return self.H_B.dim

    @cached_property
    def free_hamiltonian(self) -> np.ndarray:
        return tensor(self.H_S, np.eye(self.d)) + tensor(np.eye(self.N), self.H_B)

    @cached_property
    def total_hamiltonian(self) -> HermitianOperator:
        return HermitianOperator(self.free_hamiltonian + self.V.matrix)

    @cached_property
    def unitary(self) -> UnitaryOperator:
        return unitary_from_hamiltonian(self.total_hamiltonian, self.tau, self.hbar)

    @cached_property
    def bath_state(self) -> DensityMatrix:
        return gibbs_state(self.H_B, self.beta)


@dataclass(frozen=True)
class ThermoReport:
    """Energy change, heat, work, von Neumann entropy change and entropy production."""

    delta_E: float
    Q: float
    W: float
    delta_S: float
    sigma: float

    @classmethod
    def zero(cls) -> "ThermoReport":
        return cls(0.0, 0.0, 0.0, 0.0, 0.0)

    def first_law_residual(self) -> float:
        return abs(self.delta_E - self.W - self.Q)

    def entropy_balance_residual(self, beta: float) -> float:
        return abs(self.sigma - (self.delta_S - beta * self.Q))

    def as_dict(self) -> dict:
        return {"delta_E": self.delta_E, "Q": self.Q, "W": self.W, "delta_S": self.delta_S, "sigma": self.sigma}


class StepResult(NamedTuple):
    rho_S: DensityMatrix
    rho_tot: DensityMatrix
    report: ThermoReport


def _check_state(spec: CollisionSpec, rho) -> DensityMatrix:
    rho = rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho)
    if rho.dim != spec.N:
        raise DimensionError("system state dimension", spec.N, rho.dim)
    return rho


def _evolve(spec: CollisionSpec, rho: DensityMatrix) -> tuple[np.ndarray, np.ndarray]:
    rho_tot = tensor(rho, spec.bath_state)
    U = spec.unitary.matrix
    return rho_tot, U @ rho_tot @ U.conj().T


def apply_map(spec: CollisionSpec, rho) -> DensityMatrix:
    """The reduced map: trace out the ancilla after one collision."""
    rho = _check_state(spec, rho)
    _, out = _evolve(spec, rho)
    return DensityMatrix.from_array(partial_trace_array(out, [spec.N, spec.d], [0]))


def _tr(a, b) -> float:
    return float(np.real(np.trace(as_matrix(a) @ as_matrix(b))))


def collision_step(spec: CollisionSpec, rho) -> StepResult:
    rho = _check_state(spec, rho)
    rho_tot, out = _evolve(spec, rho)
    dims = [spec.N, spec.d]
    rho_S = DensityMatrix.from_array(partial_trace_array(out, dims, [0]))
    rho_B = partial_trace_array(out, dims, [1])
    omega_B = spec.bath_state.matrix

    delta_E = _tr(spec.H_S, rho_S.matrix - rho.matrix)
    Q = _tr(spec.H_B, omega_B - rho_B)
    W = _tr(spec.free_hamiltonian, out - rho_tot)
    delta_S = von_neumann_entropy(rho_S) - von_neumann_entropy(rho)
    sigma = _product_relative_entropy(out, rho_S, rho_B, spec)
    return StepResult(rho_S, DensityMatrix.from_array(out), ThermoReport(delta_E, Q, W, delta_S, sigma))


def _product_relative_entropy(rho_tot, rho_S, rho_B, spec: CollisionSpec) -> float:
    """``D(rho_tot || rho_S x omega_B)`` using ``ln(A x B) = ln A x 1 + 1 x ln B``.

    Exploiting the product form keeps full accuracy when ``omega_B`` has tiny
    populations, where a joint eigendecomposition would lose digits.
    """
    cross_S = -von_neumann_entropy(rho_S)
    cross_B = _tr(rho_B, log_gibbs(spec.H_B, spec.beta))
    return -von_neumann_entropy(rho_tot) - cross_S - cross_B


def iterate_map(spec: CollisionSpec, rho, L: int) -> tuple[DensityMatrix, ThermoReport]:
    """Apply ``L`` collisions; work, heat and entropy production accumulate per step,
    energy and entropy changes are taken between the endpoints."""
    if L < 0:
        raise ValueError("L must be non-negative")
    rho0 = _check_state(spec, rho)
    current = rho0
    W = Q = sigma = 0.0
    for _ in range(L):
        current, _, rep = collision_step(spec, current)
        W += rep.W
        Q += rep.Q
        sigma += rep.sigma
    if L == 0:
        return rho0, ThermoReport.zero()
    delta_E = _tr(spec.H_S, current.matrix - rho0.matrix)
    delta_S = von_neumann_entropy(current) - von_neumann_entropy(rho0)
    return current, ThermoReport(delta_E, Q, W, delta_S, sigma)


def converge_map(spec: CollisionSpec, rho, tol: float = 1e-12, max_steps: int = 100_000):
    """Iterate until successive states differ by less than ``tol`` in trace distance.

    Returns ``(state, steps, cumulative_report)``.
    """
    current = _check_state(spec, rho)
    rho0 = current
    W = Q = sigma = 0.0
    for step in range(1, max_steps + 1):
        nxt, _, rep = collision_step(spec, current)
        W += rep.W
        Q += rep.Q
        sigma += rep.sigma
        done = trace_distance(nxt, current) < tol
        current = nxt
        if done:
            delta_E = _tr(spec.H_S, current.matrix - rho0.matrix)
            delta_S = von_neumann_entropy(current) - von_neumann_entropy(rho0)
            return current, step, ThermoReport(delta_E, Q, W, delta_S, sigma)
    raise RuntimeError(f"map did not converge within {max_steps} steps")


@dataclass(frozen=True)
class EquilibriumStructure:
    """Shared eigenbasis of ``H_S`` and ``H_0``.

    ``E`` is ascending; ``E0[n]`` is the ``H_0`` eigenvalue of level ``n``;
    ``perm`` (0-based) orders ``E0`` increasingly with ties broken by ``E``.
    ``basis`` holds the level vectors as columns.
    """

    H_S: HermitianOperator
    H_0: HermitianOperator
    E: np.ndarray
    E0: np.ndarray
    basis: np.ndarray
    perm: np.ndarray = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "perm", ordering_permutation(self.E, self.E0))

    @property
    def N(self) -> int:
        return len(self.E)

    @property
    def perm1(self) -> tuple[int, ...]:
        """Ordering permutation with 1-based labels."""
        return tuple(int(p) + 1 for p in self.perm)

    @property
    def energy_scale(self) -> float:
        return float(np.max(np.abs(self.E)) + np.max(np.abs(self.E0)))

    @property
    def is_active(self) -> bool:
        """True when some pair of levels is ordered oppositely by ``H_S`` and ``H_0``."""
        dE = self.E[:, None] - self.E[None, :]
        dE0 = self.E0[:, None] - self.E0[None, :]
        scale = max(self.energy_scale, 1e-300)
        return bool(np.any(dE * dE0 < -(TOL.merge_rel * scale) ** 2))

    def projector(self, n: int) -> np.ndarray:
        v = self.basis[:, n]
        return np.outer(v, v.conj())

    def to_energy_basis(self, op) -> np.ndarray:
        b = self.basis
        return b.conj().T @ as_matrix(op) @ b

    def from_energy_basis(self, op) -> np.ndarray:
        b = self.basis
        return b @ as_matrix(op) @ b.conj().T

    @classmethod
    def from_operators(cls, H_S, H_0, basis=None) -> "EquilibriumStructure":
        """Build from ``[H_0, H_S] = 0`` alone (no coupling check)."""
        H_S = _herm(H_S)
        H_0 = _herm(H_0)
        if H_0.dim != H_S.dim:
            raise DimensionError("H_0 dimension", H_S.dim, H_0.dim)
        c = max_abs(commutator(H_0, H_S))
        if c > TOL.commutator:
            raise EquilibriumError("[H_0, H_S]", c, TOL.commutator)
        if basis is None:
            es = herm_eig(H_S)
            E, basis = es.values, es.vectors
        else:
            E, basis = _check_basis(H_S, basis)
        gaps = np.diff(E)
        if len(gaps) and gaps.min() < TOL.degeneracy_gap:
            raise DegenerateSpectrumError(
                f"H_S has a degenerate spectrum (gap {gaps.min():.3e}); "
                "the two-point measurement basis would be ambiguous"
            )
        h0 = basis.conj().T @ H_0.matrix @ basis
        off = max_abs(h0 - np.diag(np.diag(h0)))
        if off > TOL.commutator:
            raise EquilibriumError("H_0 off-diagonal in H_S eigenbasis", off, TOL.commutator)
        return cls(H_S, H_0, np.asarray(E, dtype=float), np.real(np.diag(h0)).copy(), basis)

    @classmethod
    def from_spectra(cls, E, E0) -> "EquilibriumStructure":
        """Diagonal structure in the computational basis; ``E`` must be strictly ascending."""
        E = np.asarray(E, dtype=float)
        E0 = np.asarray(E0, dtype=float)
        return cls.from_operators(np.diag(E), np.diag(E0), np.eye(len(E), dtype=complex))


def _check_basis(H_S: HermitianOperator, basis) -> tuple[np.ndarray, np.ndarray]:
    b = np.asarray(basis, dtype=complex)
    if b.shape != (H_S.dim, H_S.dim):
        raise DimensionError("basis shape", (H_S.dim, H_S.dim), b.shape)
    dev = max_abs(b.conj().T @ b - np.eye(H_S.dim))
    if dev > TOL.orthonormal:
        raise StructureError(f"supplied basis is not orthonormal (deviation {dev:.3e})")
    hb = H_S.matrix @ b
    E = np.real(np.einsum("ij,ij->j", b.conj(), hb))
    resid = max_abs(hb - b * E)
    if resid > TOL.orthonormal:
        raise StructureError(f"supplied basis does not diagonalise H_S (residual {resid:.3e})")
    if np.any(np.diff(E) < 0):
        raise StructureError("supplied basis must list levels in ascending H_S energy")
    return E, b


def ordering_permutation(E, E0) -> np.ndarray:
    """Indices ordering ``E0`` ascending; near-equal ``E0`` values are ordered by ``E``."""
    E = np.asarray(E, dtype=float)
    E0 = np.asarray(E0, dtype=float)
    scale = max(float(np.max(np.abs(E0))), 1.0) if len(E0) else 1.0
    order = np.argsort(E0, kind="stable")
    groups, current = [], [order[0]] if len(order) else []
    for prev, idx in zip(order[:-1], order[1:]):
        if E0[idx] - E0[prev] <= TOL.merge_rel * scale:
            current.append(idx)
        else:
            groups.append(current)
            current = [idx]
    if current:
        groups.append(current)
    return np.array([i for g in groups for i in sorted(g, key=lambda k: (E[k], k))], dtype=int)


def validate_equilibrium(spec: CollisionSpec, H_0, basis=None) -> EquilibriumStructure:
    """Check ``[H_0, H_S] = 0`` and ``[H_0 + H_B, V] = 0`` and return the shared eigenstructure."""
    H_0 = _herm(H_0)
    if H_0.dim != spec.N:
        raise DimensionError("H_0 dimension", spec.N, H_0.dim)
    c1 = max_abs(commutator(H_0, spec.H_S))
    if c1 > TOL.commutator:
        raise EquilibriumError("[H_0, H_S]", c1, TOL.commutator)
    conserved = tensor(H_0, np.eye(spec.d)) + tensor(np.eye(spec.N), spec.H_B)
    c2 = max_abs(commutator(conserved, spec.V))
    if c2 > TOL.commutator:
        raise EquilibriumError("[H_0 + H_B, V]", c2, TOL.commutator)
    return EquilibriumStructure.from_operators(spec.H_S, H_0, basis)


def equilibrium_thermo(es: EquilibriumStructure, spec: CollisionSpec, rho, rho_next) -> ThermoReport:
    """Averaged thermodynamics from system quantities only (valid for maps with equilibrium)."""
    rho = _check_state(spec, rho)
    rho_next = _check_state(spec, rho_next)
    diff = rho_next.matrix - rho.matrix
    H_S = spec.H_S.matrix
    H_0 = es.H_0.matrix
    omega0 = gibbs_state(H_0, spec.beta)
    Q = _tr(H_0, diff)
    W = _tr(H_S - H_0, diff)
    delta_E = _tr(H_S, diff)
    delta_S = von_neumann_entropy(rho_next) - von_neumann_entropy(rho)
    sigma = relative_entropy(rho, omega0) - relative_entropy(rho_next, omega0)
    return ThermoReport(delta_E, Q, W, delta_S, sigma)
