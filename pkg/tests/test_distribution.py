import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qbattery.distribution import DiscreteDistribution, merge_atoms


def test_merge_close_values():
    atoms = merge_atoms([1.0, 1.0 + 1e-12, 2.0], [0.25, 0.25, 0.5])
    assert len(atoms) == 2
    assert atoms[0][1] == pytest.approx(0.5)
    assert atoms[0][0] == pytest.approx(1.0 + 5e-13, abs=1e-15)


def test_merge_keeps_distinct_values():
    assert len(merge_atoms([0.0, 1e-6, 1.0], [0.2, 0.3, 0.5])) == 3


@given(st.lists(st.tuples(st.integers(-5, 5), st.floats(0.01, 1)), min_size=1, max_size=20))
def test_merge_preserves_mass_and_mean(pairs):
    vals = np.array([v for v, _ in pairs], float)
    ps = np.array([p for _, p in pairs])
    ps /= ps.sum()
    d = DiscreteDistribution.from_samples(vals, ps)
    assert d.probs.sum() == pytest.approx(1.0)
    assert d.mean() == pytest.approx(float(vals @ ps), abs=1e-12)
    assert list(d.values) == sorted(set(vals.tolist()))


def test_infinite_atom():
    d = DiscreteDistribution.from_samples([0.5, 3.0, 0.5], [0.3, 0.2, 0.5], infinite=[False, True, False])
    assert d.inf_prob == pytest.approx(0.2)
    assert d.prob_at(math.inf) == pytest.approx(0.2)
    assert d.prob_at(0.5) == pytest.approx(0.8)
    assert d.partial_moment() == pytest.approx(0.4)
    assert d.finite_mean() == pytest.approx(0.5)
    rows = list(d.rows())
    assert rows[-1] == (math.inf, pytest.approx(0.2))
    with pytest.raises(ValueError):
        d.mean()


def test_validation():
    with pytest.raises(ValueError):
        DiscreteDistribution(((0.0, 0.5),))
    with pytest.raises(ValueError):
        DiscreteDistribution(((1.0, 0.5), (0.0, 0.5)))


def test_max_abs_difference():
    a = DiscreteDistribution(((0.0, 0.5), (1.0, 0.5)))
    b = DiscreteDistribution(((0.0, 0.4), (2.0, 0.6)))
    assert a.max_abs_difference(b) == pytest.approx(0.6)
    assert a.max_abs_difference(a) == 0.0
