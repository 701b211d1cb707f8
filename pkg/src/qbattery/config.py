"""Numerical tolerances shared by every module."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-12
    unitary: float = 1e-10
    trace: float = 1e-12
    min_eigenvalue: float = -1e-10
    orthonormal: float = 1e-10
    # eigenvalues below this are treated as zero in logarithms and support checks
    eig_cutoff: float = 1e-12
    commutator: float = 1e-10
    degeneracy_gap: float = 1e-9
    stochastic_entry: float = 1e-12
    column_sum: float = 1e-10
    prob_sum: float = 1e-10
    merge_rel: float = 1e-9
    # |w| below zero_work_rel * energy scale counts as zero work (infinite efficiency)
    zero_work_rel: float = 1e-12
    regular_entry: float = 1e-12


TOL = Tolerances()
