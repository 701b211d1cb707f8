import numpy as np
import pytest

from qbattery.errors import OracleSizeError
from qbattery.oracle import enumerate_trajectories, marginal_table, oracle_distributions, verify_reduction
from qbattery.stats import energy_work_heat_distributions, passive_populations, trajectory_table, transition_matrix

CASES = [("model_1q", 1), ("model_1q", 2), ("model_1q", 3), ("model_thermal", 1), ("model_thermal", 3), ("model_2q", 1)]


@pytest.mark.parametrize("name,L", CASES)
def test_reduction(name, L, request):
    model = request.getfixturevalue(name)
    es = model.structure()
    rep = verify_reduction(model.spec, es, L)
    assert rep.heat_discrepancy < 1e-10
    assert rep.marginal_discrepancy < 1e-10
    assert rep.discrepancy == max(rep.heat_discrepancy, rep.marginal_discrepancy)


@pytest.mark.parametrize("name,L", CASES)
def test_distributions_agree(name, L, request):
    model = request.getfixturevalue(name)
    es = model.structure()
    p = passive_populations(es, model.spec.beta)
    oracle = oracle_distributions(enumerate_trajectories(model.spec, p, L, es.basis))
    reduced = energy_work_heat_distributions(trajectory_table(transition_matrix(model.spec, es), p, L), es)
    for o, r in zip(oracle, reduced):
        assert o.max_abs_difference(r) < 1e-10


def test_total_probability(model_2q):
    es = model_2q.structure()
    p = passive_populations(es, 1.0)
    trajs = enumerate_trajectories(model_2q.spec, p, 1, es.basis)
    assert sum(t.prob for t in trajs) == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(marginal_table(trajs, 4).sum(axis=1), p, atol=1e-12)
    for t in trajs:
        assert t.de == pytest.approx(t.w + t.q, abs=1e-14)


def test_zero_collisions(model_1q):
    trajs = enumerate_trajectories(model_1q.spec, [0.3, 0.7], 0)
    assert sorted((t.n, t.m, round(t.prob, 12)) for t in trajs) == [(0, 0, 0.3), (1, 1, 0.7)]


def test_size_cap(model_2q):
    with pytest.raises(OracleSizeError):
        enumerate_trajectories(model_2q.spec, np.full(4, 0.25), 7)
