"""Exact discrete distributions with an optional atom at infinity."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .config import TOL


def merge_atoms(values, probs, rel_tol: float = TOL.merge_rel) -> list[tuple[float, float]]:
    """Sort and merge values closer than ``rel_tol`` times the largest magnitude.

    A merged atom sits at the probability-weighted mean of its members.
    """
    values = np.asarray(values, dtype=float).ravel()
    probs = np.asarray(probs, dtype=float).ravel()
    if values.shape != probs.shape:
        raise ValueError("values and probabilities differ in length")
    if values.size == 0:
        return []
    scale = float(np.max(np.abs(values)))
    tol = rel_tol * (scale if scale > 0 else 1.0)
    order = np.argsort(values, kind="stable")
    out: list[tuple[float, float]] = []
    group_v, group_p = [values[order[0]]], [probs[order[0]]]
    for i in order[1:]:
        if values[i] - group_v[-1] <= tol:
            group_v.append(values[i])
            group_p.append(probs[i])
            continue
        out.append(_collapse(group_v, group_p))
        group_v, group_p = [values[i]], [probs[i]]
    out.append(_collapse(group_v, group_p))
    return out


def _collapse(vs, ps) -> tuple[float, float]:
    total = float(np.sum(ps))
    if len(vs) == 1 or vs[0] == vs[-1]:
        return float(vs[0]), total
    v = float(np.dot(vs, ps) / total) if total > 0 else float(np.mean(vs))
    return v, total


@dataclass(frozen=True)
class DiscreteDistribution:
    """Atoms ``(value, prob)`` sorted by value, plus mass ``inf_prob`` at infinity."""

    atoms: tuple[tuple[float, float], ...]
    inf_prob: float = 0.0

    def __post_init__(self):
        total = sum(p for _, p in self.atoms) + self.inf_prob
        if abs(total - 1.0) > TOL.prob_sum:
            raise ValueError(f"probabilities sum to {total!r}, expected 1")
        vals = [v for v, _ in self.atoms]
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("atom values must be strictly increasing")

    @classmethod
    def from_samples(cls, values, probs, infinite=None) -> "DiscreteDistribution":
        """Aggregate weighted outcomes; entries flagged in ``infinite`` go to the infinite atom."""
        values = np.asarray(values, dtype=float).ravel()
        probs = np.asarray(probs, dtype=float).ravel()
        inf_mask = np.zeros(values.shape, bool) if infinite is None else np.asarray(infinite, bool).ravel()
        inf_prob = float(probs[inf_mask].sum())
        atoms = merge_atoms(values[~inf_mask], probs[~inf_mask])
        return cls(tuple(atoms), inf_prob)

    @property
    def values(self) -> np.ndarray:
        return np.array([v for v, _ in self.atoms])

    @property
    def probs(self) -> np.ndarray:
        return np.array([p for _, p in self.atoms])

    def prob_at(self, value: float, rel_tol: float = TOL.merge_rel) -> float:
        if math.isinf(value):
            return self.inf_prob
        tol = rel_tol * max(abs(value), 1.0)
        return float(sum(p for v, p in self.atoms if abs(v - value) <= tol))

    def support(self, min_prob: float = 0.0) -> list[float]:
        return [v for v, p in self.atoms if p > min_prob]

    def partial_moment(self) -> float:
        """``sum value * prob`` over finite atoms."""
        return float(sum(v * p for v, p in self.atoms))

    def mean(self) -> float:
        if self.inf_prob > 0:
            raise ValueError("mean is undefined: the distribution has mass at infinity")
        return self.partial_moment()

    def finite_mean(self) -> float:
        """Mean conditioned on a finite outcome."""
        finite = 1.0 - self.inf_prob
        if finite <= 0:
            raise ValueError("no finite mass")
        return self.partial_moment() / finite

    def max_abs_difference(self, other: "DiscreteDistribution", rel_tol: float = TOL.merge_rel) -> float:
        """Largest probability difference after aligning atoms by value."""
        merged = merge_atoms(
            np.concatenate([self.values, other.values]),
            np.concatenate([self.probs, -other.probs]),
            rel_tol,
        )
        diff = max((abs(p) for _, p in merged), default=0.0)
        return max(diff, abs(self.inf_prob - other.inf_prob))

    def rows(self) -> Iterable[tuple[float, float]]:
        yield from self.atoms
        if self.inf_prob > 0:
            yield math.inf, self.inf_prob
