"""Dense complex-matrix kernel.

Operators are thin immutable wrappers around ``numpy`` arrays that check their
structural invariant once, at construction.  All functions accept either the
wrapper types or plain arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .config import TOL
from .errors import DimensionError, InfiniteRelativeEntropyError, NonConvergenceError, StructureError

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
# basis convention: index 0 is |up> (sigma_z = +1), index 1 is |down>
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


def as_matrix(op) -> np.ndarray:
    """Return the complex square array behind ``op``."""
    m = op.matrix if isinstance(op, _Operator) else np.asarray(op, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError("square matrix shape", "(n, n)", m.shape)
    return m


class _Operator:
    __slots__ = ("matrix",)

    def __init__(self, entries):
        m = np.array(as_matrix(entries), dtype=complex, copy=True)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        self._check()

    def _check(self):
        pass

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dag(self) -> np.ndarray:
        return self.matrix.conj().T

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim})"


def _hermiticity_error(m: np.ndarray) -> tuple[float, tuple[int, int]]:
    diff = np.abs(m - m.conj().T)
    idx = np.unravel_index(np.argmax(diff), diff.shape)
    return float(diff[idx]), (int(idx[0]), int(idx[1]))


class HermitianOperator(_Operator):
    __slots__ = ()

    def _check(self):
        err, (i, j) = _hermiticity_error(self.matrix)
        if err > TOL.hermitian:
            raise StructureError(
                f"operator is not Hermitian: entries ({i},{j}) and ({j},{i}) differ by {err:.3e}"
            )


class UnitaryOperator(_Operator):
    __slots__ = ()

    def _check(self):
        dev = np.max(np.abs(self.matrix @ self.dag() - np.eye(self.dim)))
        if dev > TOL.unitary:
            raise StructureError(f"operator is not unitary: max |U U^dag - I| = {dev:.3e}")


class DensityMatrix(HermitianOperator):
    __slots__ = ()

    def _check(self):
        super()._check()
        tr = np.trace(self.matrix)
        if abs(tr - 1) > TOL.trace:
            raise StructureError(f"density matrix trace is {tr.real:.15g}, expected 1")
        lo = np.linalg.eigvalsh(self.matrix)[0]
        if lo < TOL.min_eigenvalue:
            raise StructureError(f"density matrix has negative eigenvalue {lo:.3e}")

    @classmethod
    def from_array(cls, m) -> "DensityMatrix":
        """Build from a numerically computed state, removing round-off anti-Hermitian parts."""
        m = np.asarray(m, dtype=complex)
        return cls((m + m.conj().T) / 2)

    @classmethod
    def diagonal(cls, populations, basis=None) -> "DensityMatrix":
        p = np.asarray(populations, dtype=float)
        if basis is None:
            return cls(np.diag(p).astype(complex))
        b = np.asarray(basis, dtype=complex)
        return cls.from_array((b * p) @ b.conj().T)

    @classmethod
    def pure(cls, vector) -> "DensityMatrix":
        v = np.asarray(vector, dtype=complex)
        v = v / np.linalg.norm(v)
        return cls.from_array(np.outer(v, v.conj()))


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues and orthonormal eigenvectors (as columns)."""

    values: np.ndarray
    vectors: np.ndarray

    def __post_init__(self):
        if np.any(np.diff(self.values) < 0):
            raise StructureError("eigenvalues are not sorted")
        v = self.vectors
        dev = np.max(np.abs(v.conj().T @ v - np.eye(v.shape[1])))
        if dev > TOL.orthonormal:
            raise StructureError(f"eigenvectors not orthonormal (deviation {dev:.3e})")

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T

    def apply(self, func) -> np.ndarray:
        """Matrix function ``V f(diag) V^dag``."""
        return (self.vectors * func(self.values)) @ self.vectors.conj().T

    def min_gap(self) -> float:
        return float(np.min(np.diff(self.values))) if len(self.values) > 1 else np.inf


def tensor(*ops) -> np.ndarray:
    """Kronecker product, first factor most significant."""
    return reduce(np.kron, (as_matrix(op) for op in ops))


def embed(op, position: int, dims: Sequence[int]) -> np.ndarray:
    """Lift a single-factor operator to the full tensor product space."""
    factors = [np.eye(d, dtype=complex) for d in dims]
    factors[position] = as_matrix(op)
    return tensor(*factors)


def _check_dims(m: np.ndarray, dims: Sequence[int]):
    total = int(np.prod(dims))
    if total != m.shape[0]:
        raise DimensionError("product of subsystem dims", m.shape[0], total)


def partial_trace_array(m, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Partial trace of an arbitrary operator, keeping the factors in ``keep`` (in order)."""
    m = as_matrix(m)
    dims = [int(d) for d in dims]
    _check_dims(m, dims)
    keep = sorted(set(int(k) for k in keep))
    if not keep or keep[0] < 0 or keep[-1] >= len(dims):
        raise DimensionError("kept subsystem indices", f"nonempty subset of 0..{len(dims) - 1}", keep)
    n = len(dims)
    t = m.reshape(dims + dims)
    # einsum labels: row index k -> k, column index k -> n + k, traced pairs share a label
    letters = [chr(ord("a") + i) for i in range(2 * n)]
    rows = letters[:n]
    cols = [letters[n + k] if k in keep else letters[k] for k in range(n)]
    out = [rows[k] for k in keep] + [cols[k] for k in keep]
    r = np.einsum("".join(rows + cols) + "->" + "".join(out), t)
    d = int(np.prod([dims[k] for k in keep]))
    return r.reshape(d, d)


def partial_trace(rho, dims: Sequence[int], keep: Sequence[int]) -> DensityMatrix:
    return DensityMatrix.from_array(partial_trace_array(rho, dims, keep))


def herm_eig(h) -> EigenSystem:
    m = as_matrix(h)
    err, _ = _hermiticity_error(m)
    if err > TOL.hermitian:
        raise StructureError(f"herm_eig needs a Hermitian matrix (asymmetry {err:.3e})")
    try:
        values, vectors = np.linalg.eigh((m + m.conj().T) / 2)
    except np.linalg.LinAlgError as exc:
        raise NonConvergenceError(f"eigh failed to converge for dim {m.shape[0]}: {exc}") from exc
    return EigenSystem(values, vectors)


def unitary_from_hamiltonian(h, tau: float, hbar: float = 1.0) -> UnitaryOperator:
    """``exp(-i tau H / hbar)`` through the eigendecomposition of ``H``."""
    if tau < 0:
        raise ValueError("tau must be non-negative")
    if hbar <= 0:
        raise ValueError("hbar must be positive")
    es = herm_eig(h)
    return UnitaryOperator(es.apply(lambda lam: np.exp(-1j * tau * lam / hbar)))


def gibbs_state(h, beta: float) -> DensityMatrix:
    """``exp(-beta H) / Z``; ``beta`` may be negative."""
    es = herm_eig(h)
    x = -beta * es.values
    w = np.exp(x - x.max())
    return DensityMatrix.diagonal(w / w.sum(), es.vectors)


def log_gibbs(h, beta: float) -> np.ndarray:
    """``ln(exp(-beta H) / Z)`` evaluated without forming the state."""
    es = herm_eig(h)
    x = -beta * es.values
    shift = x.max()
    return es.apply(lambda _: x - shift - np.log(np.sum(np.exp(x - shift))))


def _entropy_terms(values: np.ndarray) -> float:
    p = values[values > TOL.eig_cutoff]
    return float(np.sum(p * np.log(p)))


def von_neumann_entropy(rho) -> float:
    """Entropy in nats."""
    lam = np.linalg.eigvalsh(as_matrix(rho))
    return -_entropy_terms(lam)


def relative_entropy(a, b) -> float:
    """``Tr[a ln a] - Tr[a ln b]`` in nats."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError("relative entropy operands", a.shape, b.shape)
    lam_a = np.linalg.eigvalsh(a)
    mu, vecs = np.linalg.eigh(b)
    weights = np.real(np.einsum("ik,ij,jk->k", vecs.conj(), a, vecs))
    support = mu > TOL.eig_cutoff
    leak = float(np.sum(weights[~support]))
    if leak > TOL.eig_cutoff:
        raise InfiniteRelativeEntropyError(leak)
    cross = float(np.sum(weights[support] * np.log(mu[support])))
    return _entropy_terms(lam_a) - cross


def trace_distance(a, b) -> float:
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(as_matrix(a) - as_matrix(b)))))


def commutator(a, b) -> np.ndarray:
    a = as_matrix(a)
    b = as_matrix(b)
    return a @ b - b @ a


def max_abs(m) -> float:
    return float(np.max(np.abs(m))) if np.size(m) else 0.0
