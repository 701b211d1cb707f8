import numpy as np
import pytest

from qbattery.figures import FIG12_BETA_H, FIG3_COLUMNS, fig1_rows, fig2_rows, fig3_point, fig3_rows
from qbattery.models import ModelParams2Q, build_2q, stationary_coefficients_2q
from qbattery.stats import is_regular, transition_matrix

ZEROS = (0.0, np.pi / np.sqrt(2))


def dist(x):
    return min(abs(x - z) for z in ZEROS)


def test_fig1_rows_normalised():
    rows = np.array(fig1_rows())
    assert rows.shape == (len(FIG12_BETA_H), 7)
    assert np.allclose(rows[:, 1] + rows[:, 2], 1, atol=1e-14)
    assert np.allclose(rows[:, 3:].sum(axis=1), 1, atol=1e-14)
    # infinite temperature: every trajectory equally likely
    assert np.allclose(rows[0, 1:], [0.5, 0.5, 0.25, 0.25, 0.25, 0.25])
    assert np.all(np.diff(rows[:, 2]) >= 0)


def test_fig2_rows_normalised():
    rows = np.array(fig2_rows())
    assert np.allclose(rows[:, 1:5].sum(axis=1), 1, atol=1e-14)
    assert np.allclose(rows[:, 5:].sum(axis=1), 1, atol=1e-14)
    assert np.allclose(rows[0, 1:5], [6 / 16, 6 / 16, 2 / 16, 2 / 16])


def test_fig3_limit_columns():
    # beta = 1 and h = 0.6 x, so beta h = 0.6 x
    rows = np.array(fig3_rows(20, np.linspace(0.2, 3, 7)))
    assert rows.shape[1] == len(FIG3_COLUMNS)
    for row in rows:
        assert np.allclose(row[11:16], stationary_coefficients_2q(0.6 * row[0]), atol=1e-14)


@pytest.mark.parametrize("x", [0.5, 1.0, 1.5, 2.7, 3.0])
def test_fig3_converges_well_away_from_zeros(x):
    row = np.array(fig3_point(x, 20))
    assert dist(x) > 0.3
    assert np.max(np.abs(row[1:6] - row[11:16])) < 2e-2
    assert np.max(np.abs(row[6:11] - row[11:16])) < 2e-2


def test_slow_relaxation_near_psi_zero():
    # the second eigenvalue approaches 1 as Psi -> 0, so finite L lags the limit
    mods = []
    for x in (1.0, 2.0, 2.2, np.pi / np.sqrt(2) - 1e-3):
        model = build_2q(ModelParams2Q(h=0.6 * x, J=x, Jp=x))
        mods.append(is_regular(transition_matrix(model.spec, model.structure())).second_eigenvalue_modulus)
    assert mods[1] < mods[2] < mods[3] < 1
    assert mods[3] > 0.999


def test_parallel_rows_match_serial():
    xs = np.linspace(0.3, 2.9, 6)
    assert fig3_rows(20, xs, jobs=2) == fig3_rows(20, xs, jobs=1)
