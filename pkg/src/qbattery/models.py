"""Bundled qubit batteries and their analytic transition matrices.

Single-qubit models use the basis ``(|up>, |down>)``; energy levels are
labelled 1 = ``|down>``, 2 = ``|up>``.  The two-qubit battery lives on
(qubit 1, qubit 2) and the ancilla couples to qubit 1 only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .collision import CollisionSpec, EquilibriumStructure, validate_equilibrium
from .errors import ParameterError
from .operators import (
    IDENTITY_2,
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    tensor,
)
from .stats import StochasticMatrix


@dataclass(frozen=True)
class ModelParams1Q:
    h: float
    a: float
    tau: float = 1.0
    hbar: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        if not self.h > 0:
            raise ParameterError(f"h > 0 required (got h={self.h})")
        if self.tau < 0 or self.hbar <= 0:
            raise ParameterError("tau >= 0 and hbar > 0 required")


@dataclass(frozen=True)
class ModelParams2Q:
    h: float
    J: float
    Jp: float
    tau: float = 1.0
    hbar: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        if not 2 * self.J > self.h > 0:
            raise ParameterError(f"2J > h > 0 required (got h={self.h}, J={self.J})")
        if self.tau < 0 or self.hbar <= 0:
            raise ParameterError("tau >= 0 and hbar > 0 required")


class Model(NamedTuple):
    spec: CollisionSpec
    H_0: np.ndarray
    basis: Optional[np.ndarray] = None

    def structure(self) -> EquilibriumStructure:
        return validate_equilibrium(self.spec, self.H_0, self.basis)


def _qubit_spec(p: ModelParams1Q, V: np.ndarray) -> CollisionSpec:
    H = p.h / 2 * SIGMA_Z
    return CollisionSpec(H, H, V, tau=p.tau, beta=p.beta, hbar=p.hbar)


def build_1q(p: ModelParams1Q) -> Model:
    """Charging qubit: pair creation/annihilation coupling, equilibrium at ``H_0 = -H_S``."""
    V = p.a * (tensor(SIGMA_PLUS, SIGMA_PLUS) + tensor(SIGMA_MINUS, SIGMA_MINUS))
    spec = _qubit_spec(p, V)
    return Model(spec, -spec.H_S.matrix)


def build_thermal_1q(p: ModelParams1Q) -> Model:
    """Thermalising qubit: exchange coupling, equilibrium at ``H_0 = H_S``."""
    V = p.a * (tensor(SIGMA_PLUS, SIGMA_MINUS) + tensor(SIGMA_MINUS, SIGMA_PLUS))
    spec = _qubit_spec(p, V)
    return Model(spec, spec.H_S.matrix)


def basis_2q() -> np.ndarray:
    """Singlet, ``|dd>``, ``|uu>``, triplet-zero as columns (levels 1..4)."""
    uu, ud, du, dd = np.eye(4, dtype=complex)
    s = np.sqrt(0.5)
    return np.column_stack([s * (ud - du), dd, uu, s * (ud + du)])


def build_2q(p: ModelParams2Q) -> Model:
    zeeman = p.h / 2 * (tensor(SIGMA_Z, IDENTITY_2) + tensor(IDENTITY_2, SIGMA_Z))
    H_S = zeeman + p.J * (tensor(SIGMA_X, SIGMA_X) + tensor(SIGMA_Y, SIGMA_Y))
    H_B = p.h / 2 * SIGMA_Z
    # factor order (qubit 1, qubit 2, ancilla)
    V = p.Jp * (tensor(SIGMA_X, IDENTITY_2, SIGMA_X) + tensor(SIGMA_Y, IDENTITY_2, SIGMA_Y))
    spec = CollisionSpec(H_S, H_B, V, tau=p.tau, beta=p.beta, hbar=p.hbar)
    return Model(spec, zeeman, basis_2q())


def coupling_g(a: float, h: float, tau: float = 1.0, hbar: float = 1.0) -> float:
    """Transition probability ``a^2 sin^2(tau sqrt(h^2+a^2)/hbar) / (h^2+a^2)``."""
    r2 = h * h + a * a
    if r2 == 0:
        return 0.0
    return a * a * np.sin(tau * np.sqrt(r2) / hbar) ** 2 / r2


def _two_level(beta_h: float, g: float, up_weight_sign: int) -> StochasticMatrix:
    half = beta_h / 2
    Z = 2 * np.cosh(half)
    up = np.exp(up_weight_sign * half) / Z  # rate factor for 1 -> 2
    down = np.exp(-up_weight_sign * half) / Z
    T = np.array([[1 - up * g, down * g], [up * g, 1 - down * g]])
    return StochasticMatrix(T)


def t1q_closed_form(p: ModelParams1Q) -> StochasticMatrix:
    return _two_level(p.beta * p.h, coupling_g(p.a, p.h, p.tau, p.hbar), +1)


def t_thermal_closed_form(p: ModelParams1Q) -> StochasticMatrix:
    return _two_level(p.beta * p.h, coupling_g(p.a, 0.0, p.tau, p.hbar), -1)


def phi_psi_delta(p: ModelParams2Q) -> tuple[float, float, float]:
    s = p.J ** 2 + p.Jp ** 2
    phase = p.tau / p.hbar * np.sqrt(s)
    phi = p.J ** 2 + p.Jp ** 2 * np.cos(phase) ** 2
    psi = p.Jp ** 2 * np.sin(phase) ** 2
    return phi, psi, (phi - psi) ** 2


def t2q_closed_form(p: ModelParams2Q) -> StochasticMatrix:
    phi, psi, delta = phi_psi_delta(p)
    s2 = (p.J ** 2 + p.Jp ** 2) ** 2
    lo = 1 / (1 + np.exp(p.beta * p.h))  # 1 / (1 + e^{bh})
    hi = 1 - lo  # e^{bh} / (1 + e^{bh})
    x = phi * psi
    T = np.array(
        [
            [phi ** 2, 2 * lo * x, 2 * hi * x, psi ** 2],
            [2 * hi * x, hi * s2 + lo * delta, 0.0, 2 * hi * x],
            [2 * lo * x, 0.0, lo * s2 + hi * delta, 2 * lo * x],
            [psi ** 2, 2 * lo * x, 2 * hi * x, phi ** 2],
        ]
    )
    return StochasticMatrix(T / s2)


def z0_2q(beta_h: float) -> float:
    return 2 + 2 * np.cosh(beta_h)


def stationary_coefficients_2q(beta_h: float) -> np.ndarray:
    """Infinite-``L`` weights of the two-qubit work atoms (equal to the heat weights)."""
    e = np.exp(beta_h)
    return np.array([6 * np.cosh(beta_h), e, 1 / e, e * e + 3, 3 + 1 / (e * e)]) / z0_2q(beta_h) ** 2


def recharging_limits_2q(p: ModelParams2Q) -> tuple[float, float]:
    """Asymptotic average work and heat of the two-qubit recharging process."""
    bh = p.beta * p.h
    r = np.sinh(bh) / (1 + np.cosh(bh))
    return 2 * p.J * r, -p.h * r


def efficiency_probs_closed_form(model: str, beta_h: float) -> dict[str, float]:
    """Probabilities of each efficiency value for the bundled batteries.

    1q keys: ``inf``, ``1/2``.  2q keys: ``inf``, ``eta``, ``-eta``, ``eta/2``
    where ``eta = 1 - h/2J``.
    """
    if model == "1q":
        Z2 = (2 * np.cosh(beta_h / 2)) ** 2
        return {"inf": 2 / Z2, "1/2": 2 * np.cosh(beta_h) / Z2}
    if model == "2q":
        Z2 = z0_2q(beta_h) ** 2
        c = 2 * np.cosh(beta_h)
        return {"inf": 3 * c / Z2, "eta": (2 + c * c) / Z2, "-eta": 2 / Z2, "eta/2": c / Z2}
    raise ValueError(f"unknown model {model!r}; expected '1q' or '2q'")
