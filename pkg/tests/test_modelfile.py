import numpy as np
import pytest

from qbattery.errors import ModelFileError
from qbattery.modelfile import bundled_model_path, dump_model, load_custom_model, parse_model
from qbattery.cycle import cycle_report
from qbattery.stats import transition_matrix


def same_model(a, b):
    for name in ("H_S", "H_B", "V"):
        assert np.array_equal(getattr(a.spec, name).matrix, getattr(b.spec, name).matrix)
    assert np.array_equal(np.asarray(a.H_0), np.asarray(b.H_0))
    assert (a.spec.beta, a.spec.tau, a.spec.hbar) == (b.spec.beta, b.spec.tau, b.spec.hbar)


def test_bundled_model_matches_builtin(model_1q):
    m = load_custom_model(bundled_model_path())
    same_model(m, model_1q)
    es, es_ref = m.structure(), model_1q.structure()
    assert cycle_report(es, 1.0) == cycle_report(es_ref, 1.0)
    assert np.array_equal(transition_matrix(m.spec, es).T, transition_matrix(model_1q.spec, es_ref).T)


@pytest.mark.parametrize("name", ["model_1q", "model_thermal"])
def test_round_trip(name, request, tmp_path):
    model = request.getfixturevalue(name)
    path = tmp_path / "m.model"
    dump_model(model, path)
    same_model(load_custom_model(path), model)


def _text_with(section, rows):
    text = bundled_model_path().read_text()
    head, rest = text.split(f"[{section}]\n", 1)
    body, tail = rest.split("\n\n", 1)
    return head + f"[{section}]\n" + rows + "\n\n" + tail


def test_non_hermitian_coupling_names_entries():
    rows = "0,0 0,0 0,0 1,0\n0,0 0,0 0,0 0,0\n0,0 0,0 0,0 0,0\n2,0 0,0 0,0 0,0"
    with pytest.raises(ModelFileError, match=r"\(0,3\).*\(3,0\)"):
        parse_model(_text_with("V", rows))


def test_noncommuting_h0_reports_norm():
    with pytest.raises(ModelFileError, match="commut"):
        parse_model(_text_with("H_0", "0,0 1,0\n1,0 0,0"))


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ModelFileError, match="line"):
        parse_model(_text_with("H_S", "0.5 0,0\n0,0 -0.5,0"))
    with pytest.raises(ModelFileError, match="missing"):
        parse_model("[H_S]\n1,0\n")
    with pytest.raises(ModelFileError, match="unknown section"):
        parse_model("[H_X]\n")


def test_dimension_mismatch():
    with pytest.raises(ModelFileError):
        parse_model(_text_with("V", "0,0 0,0\n0,0 0,0"))
