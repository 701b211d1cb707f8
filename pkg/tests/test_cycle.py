import numpy as np
import pytest

from qbattery.collision import EquilibriumStructure
from qbattery.cycle import (
    charged_state,
    cycle_report,
    ergotropy_brute_force,
    ergotropy_closed_form,
    extraction_unitary,
    passive_populations,
    passive_state,
)
from qbattery.models import ModelParams1Q, ModelParams2Q, build_1q, build_2q, build_thermal_1q
from qbattery.operators import von_neumann_entropy


BETAS = [0.1, 0.5, 1.0, 2.0, 5.0]


def random_structure(rng, N):
    E = np.sort(rng.normal(size=N))
    while np.min(np.diff(E)) < 1e-3:
        E = np.sort(rng.normal(size=N))
    return EquilibriumStructure.from_spectra(E, rng.normal(size=N))


def test_closed_form_matches_brute_force(rng):
    for _ in range(60):
        N = int(rng.integers(2, 5))
        es = random_structure(rng, N)
        beta = float(rng.uniform(0.1, 3))
        rho = charged_state(es, beta)
        assert abs(ergotropy_closed_form(es, beta) - ergotropy_brute_force(rho, es.H_S)) < 1e-12


def test_1q_values(p1q):
    es = build_1q(p1q).structure()
    rep = cycle_report(es, 1.0)
    # E = (-1/2, 1/2) with inverted populations
    assert rep.ergotropy == pytest.approx(np.tanh(0.5), abs=1e-14)
    assert rep.recharging_work == pytest.approx(2 * np.tanh(0.5), abs=1e-14)
    assert rep.efficiency == pytest.approx(0.5, abs=1e-14)


def test_2q_ergotropy_value(p2q):
    es = build_2q(p2q).structure()
    assert ergotropy_closed_form(es, 1.0) == pytest.approx(0.4078376574322272, abs=1e-13)


@pytest.mark.parametrize("beta", BETAS)
def test_efficiency_is_beta_independent(beta):
    es1 = build_1q(ModelParams1Q(h=0.7, a=1.3, beta=beta)).structure()
    assert abs(cycle_report(es1, beta).efficiency - 0.5) < 1e-12
    es2 = build_2q(ModelParams2Q(h=0.6, J=1.0, Jp=0.4, beta=beta)).structure()
    assert abs(cycle_report(es2, beta).efficiency - 0.7) < 1e-12


def test_thermal_map_is_inactive(p1q):
    rep = cycle_report(build_thermal_1q(p1q).structure(), 1.0)
    assert not rep.active
    assert rep.ergotropy == 0.0
    assert rep.as_dict()["eta_th"] == "inactive"


def test_second_law_bound(rng):
    for _ in range(50):
        es = random_structure(rng, int(rng.integers(2, 6)))
        rep = cycle_report(es, float(rng.uniform(0.1, 4)))
        assert rep.recharging_work >= rep.ergotropy - 1e-12


def test_passive_state_is_passive(model_2q):
    es = model_2q.structure()
    p = passive_populations(es, 1.0)
    assert np.all(np.diff(p) <= 1e-15)
    assert ergotropy_brute_force(passive_state(es, 1.0), es.H_S) == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("fixture", ["model_1q", "model_2q"])
def test_extraction_unitary_maps_charged_to_passive(fixture, request):
    es = request.getfixturevalue(fixture).structure()
    u = extraction_unitary(es).matrix
    out = u @ charged_state(es, 1.0).matrix @ u.conj().T
    assert np.max(np.abs(out - passive_state(es, 1.0).matrix)) < 1e-13
    # a unitary cannot change the spectrum
    assert von_neumann_entropy(out) == pytest.approx(von_neumann_entropy(charged_state(es, 1.0)), abs=1e-12)


def test_tie_breaking_permutations(model_1q, model_2q):
    assert list(model_1q.structure().perm) == [1, 0]
    assert list(model_2q.structure().perm) == [1, 0, 3, 2]


def test_brute_force_rejects_coherent_state(model_1q):
    es = model_1q.structure()
    with pytest.raises(Exception):
        ergotropy_brute_force(np.full((2, 2), 0.5), es.H_S)
