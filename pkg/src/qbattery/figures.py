"""Tabulated data behind the efficiency and recharging figures, and generic sweeps."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from typing import Sequence

import numpy as np

from .cycle import cycle_report
from .models import ModelParams1Q, ModelParams2Q, build_1q, build_2q, build_thermal_1q
from .stats import (
    efficiency_distribution,
    energy_work_heat_distributions,
    heat_work_coefficients_2q,
    is_regular,
    passive_populations,
    stationary_table,
    trajectory_table,
    transition_matrix,
)

FIG12_BETA_H = np.linspace(0.0, 5.0, 101)
FIG3_X = np.linspace(0.1, 3.0, 300)
FIG2_H, FIG2_J = 0.6, 1.0


def _pairs(N: int) -> list[str]:
    return [f"P_{n + 1}to{m + 1}" for n in range(N) for m in range(N)]


FIG1_COLUMNS = ["beta_h", "P_inf", "P_half"] + _pairs(2)
FIG2_COLUMNS = ["beta_h", "P_inf", "P_eta", "P_minus_eta", "P_half_eta"] + _pairs(4)
FIG3_COLUMNS = (
    ["x"] + [f"A{i}_L" for i in range(5)] + [f"B{i}_L" for i in range(5)] + [f"A{i}_inf" for i in range(5)]
)


def fig1_rows(beta_h: Sequence[float] = FIG12_BETA_H) -> list[list[float]]:
    """Single-qubit efficiency probabilities and stationary trajectory probabilities versus beta*h."""
    es = build_1q(ModelParams1Q(h=1.0, a=1.0)).structure()
    rows = []
    for bh in beta_h:
        dist = efficiency_distribution(es, bh)
        P = stationary_table(es, bh).P
        rows.append([bh, dist.inf_prob, dist.prob_at(0.5)] + list(P.ravel()))
    return rows


def fig2_rows(beta_h: Sequence[float] = FIG12_BETA_H, h: float = FIG2_H, J: float = FIG2_J) -> list[list[float]]:
    es = build_2q(ModelParams2Q(h=h, J=J, Jp=J)).structure()
    eta = 1 - h / (2 * J)
    rows = []
    for bh in beta_h:
        beta = bh / h
        dist = efficiency_distribution(es, beta)
        P = stationary_table(es, beta).P
        probs = [dist.prob_at(eta), dist.prob_at(-eta), dist.prob_at(eta / 2)]
        rows.append([bh, dist.inf_prob] + probs + list(P.ravel()))
    return rows


def fig3_point(x: float, L: int) -> list[float]:
    """``beta = tau/hbar = 1``, ``J = J' = x``, ``h = 0.6 x``."""
    model = build_2q(ModelParams2Q(h=0.6 * x, J=x, Jp=x, tau=1.0, hbar=1.0, beta=1.0))
    es = model.structure()
    T = transition_matrix(model.spec, es)
    finite = heat_work_coefficients_2q(trajectory_table(T, passive_populations(es, 1.0), L))
    limit = heat_work_coefficients_2q(stationary_table(es, 1.0))
    return [x] + list(finite.A) + list(finite.B) + list(limit.A)


def fig3_rows(L: int = 20, xs: Sequence[float] = FIG3_X, jobs: int = 1) -> list[list[float]]:
    return parallel_map(fig3_point, xs, [L] * len(xs), jobs=jobs)


def parallel_map(func, *iterables, jobs: int = 1) -> list:
    """Ordered map, in worker processes when ``jobs > 1``."""
    if jobs <= 1:
        return list(map(func, *iterables))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, *iterables))


SWEEP_COLUMNS = [
    "ergotropy",
    "recharging_work",
    "eta_th",
    "mean_energy",
    "mean_work",
    "mean_heat",
    "second_eigenvalue_modulus",
]

BUILDERS = {"1q": build_1q, "thermal-1q": build_thermal_1q, "2q": build_2q}


def sweep_point(model_name: str, params, var: str, value: float, L) -> list[float]:
    """Cycle figures and mean recharging energy/work/heat after ``L`` collisions (``None`` = infinite)."""
    p = replace(params, **{var: value})
    model = BUILDERS[model_name](p)
    es = model.structure()
    beta = p.beta
    T = transition_matrix(model.spec, es)
    table = stationary_table(es, beta) if L is None else trajectory_table(T, passive_populations(es, beta), L)
    dists = energy_work_heat_distributions(table, es)
    cyc = cycle_report(es, beta)
    eta = cyc.efficiency if cyc.active else float("nan")
    return [
        value,
        cyc.ergotropy,
        cyc.recharging_work,
        eta,
        dists.energy.mean(),
        dists.work.mean(),
        dists.heat.mean(),
        is_regular(T).second_eigenvalue_modulus,
    ]


def sweep_rows(model_name: str, params, var: str, values, L=None, jobs: int = 1) -> list[list[float]]:
    n = len(values)
    return parallel_map(sweep_point, [model_name] * n, [params] * n, [var] * n, list(values), [L] * n, jobs=jobs)
