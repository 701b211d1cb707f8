"""Ergotropy extraction and recharging: the battery's charge/discharge cycle."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .collision import EquilibriumStructure
from .config import TOL
from .errors import StructureError
from .operators import DensityMatrix, UnitaryOperator, as_matrix, herm_eig, max_abs

MAX_BRUTE_FORCE_DIM = 8


def _boltzmann(energies, beta: float) -> np.ndarray:
    x = -beta * np.asarray(energies, dtype=float)
    w = np.exp(x - x.max())
    return w / w.sum()


def charged_populations(es: EquilibriumStructure, beta: float) -> np.ndarray:
    """Level populations of the equilibrium (charged) state ``exp(-beta H_0)/Z_0``."""
    return _boltzmann(es.E0, beta)


def passive_populations(es: EquilibriumStructure, beta: float) -> np.ndarray:
    """Populations ``exp(-beta E0[perm[n]]) / Z_0`` of the passive state."""
    return charged_populations(es, beta)[es.perm]


def ergotropy_closed_form(es: EquilibriumStructure, beta: float) -> float:
    p = passive_populations(es, beta)
    return float(np.sum((es.E[es.perm] - es.E) * p))


def ergotropy_brute_force(rho, H_S) -> float:
    """Maximum of ``Tr[H_S (rho - u rho u^dag)]`` over all permutations of energy levels.

    Only states diagonal in the ``H_S`` eigenbasis are supported.
    """
    es = herm_eig(H_S)
    n = len(es.values)
    if n > MAX_BRUTE_FORCE_DIM:
        raise ValueError(f"brute-force ergotropy limited to dim <= {MAX_BRUTE_FORCE_DIM}, got {n}")
    r = es.vectors.conj().T @ as_matrix(rho) @ es.vectors
    off = max_abs(r - np.diag(np.diag(r)))
    if off > 1e-10:
        raise StructureError(f"state is not diagonal in the H_S eigenbasis (off-diagonal {off:.3e})")
    p = np.real(np.diag(r))
    E = es.values
    initial = float(p @ E)
    best = -math.inf
    for sigma in itertools.permutations(range(n)):
        best = max(best, initial - float(p @ E[list(sigma)]))
    return best


def passive_state(es: EquilibriumStructure, beta: float) -> DensityMatrix:
    return DensityMatrix.diagonal(passive_populations(es, beta), es.basis)


def charged_state(es: EquilibriumStructure, beta: float) -> DensityMatrix:
    return DensityMatrix.diagonal(charged_populations(es, beta), es.basis)


def extraction_unitary(es: EquilibriumStructure, energy_basis: bool = False) -> UnitaryOperator:
    """Permutation ``u_ij = delta(perm_i, j)`` taking the charged state to the passive one.

    Returned in the computational basis unless ``energy_basis`` is set.
    """
    n = es.N
    u = np.zeros((n, n), dtype=complex)
    u[np.arange(n), es.perm] = 1.0
    if energy_basis:
        return UnitaryOperator(u)
    return UnitaryOperator(es.from_energy_basis(u))


@dataclass(frozen=True)
class CycleReport:
    ergotropy: float
    recharging_work: float
    # None marks an inactive equilibrium (zero ergotropy), where the efficiency is undefined
    efficiency: Optional[float]

    @property
    def active(self) -> bool:
        return self.efficiency is not None

    def as_dict(self) -> dict:
        return {
            "ergotropy": self.ergotropy,
            "recharging_work": self.recharging_work,
            "eta_th": self.efficiency if self.active else "inactive",
        }


def cycle_report(es: EquilibriumStructure, beta: float) -> CycleReport:
    charged = charged_populations(es, beta)
    passive = charged[es.perm]
    ergotropy = float(np.sum(es.E * (charged - passive)))
    recharging = float(np.sum((es.E - es.E0) * (charged - passive)))
    scale = max(es.energy_scale, 1e-300)
    if ergotropy <= TOL.zero_work_rel * scale:
        return CycleReport(max(ergotropy, 0.0), recharging, None)
    assert recharging > 0, "second law: recharging work must exceed the ergotropy"
    return CycleReport(ergotropy, recharging, ergotropy / recharging)
