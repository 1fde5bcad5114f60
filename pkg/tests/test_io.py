"""JSON round trips and document validation."""

import json

import numpy as np
import pytest

from schmidtkit import (
    Bipartition,
    InvalidArgs,
    check_decomposable,
    dumps_canonical,
    ghz,
    load_decomposition,
    load_density,
    load_state,
    new_state,
    pure_density,
    report_to_dict,
    save_decomposition,
    save_density,
    save_state,
    schmidt_decompose_bipartite,
    w_state,
)
from schmidtkit.io import decomposition_to_dict


def test_state_round_trip_exact(tmp_path):
    rng = np.random.default_rng(3)
    amps = rng.standard_normal(12) + 1j * rng.standard_normal(12)
    state = new_state((3, 4), amps / np.linalg.norm(amps), label="sample")
    path = tmp_path / "s.json"
    save_state(path, state)
    back = load_state(path)
    assert back.dims == (3, 4)
    assert back.label == "sample"
    assert np.array_equal(back.amplitudes, state.amplitudes)


def test_state_load_renormalizes(tmp_path):
    # writer quantized the amplitudes; loader repairs the norm drift
    doc = {"version": 1, "dims": [2],
           "amplitudes": [[0.7071068, 0.0], [0.7071068, 0.0]]}
    path = tmp_path / "s.json"
    path.write_text(json.dumps(doc))
    state = load_state(path)
    assert abs(np.linalg.norm(state.amplitudes) - 1.0) < 1e-12


def test_density_round_trip_exact(tmp_path):
    rho = pure_density(w_state())
    path = tmp_path / "d.json"
    save_density(path, rho)
    back = load_density(path)
    assert back.dims == (2, 2, 2)
    assert np.array_equal(back.entries, rho.entries)


def test_decomposition_round_trip_exact(tmp_path):
    dec = schmidt_decompose_bipartite(
        ghz(3), Bipartition((1,), (2, 3))).decomposition
    path = tmp_path / "dec.json"
    save_decomposition(path, dec)
    back = load_decomposition(path)
    assert back.dims == dec.dims
    assert np.array_equal(back.coefficients, dec.coefficients)
    for mine, theirs in zip(back.vectors, dec.vectors):
        assert np.array_equal(mine, theirs)


def test_decomposition_dict_carries_bipartition():
    cut = Bipartition((1, 3), (2,))
    dec = schmidt_decompose_bipartite(ghz(3), cut).decomposition
    doc = decomposition_to_dict(dec, cut)
    assert doc["bipartition"] == {"left": [1, 3], "right": [2]}
    assert "bipartition" not in decomposition_to_dict(dec)


def test_dumps_canonical_is_deterministic():
    doc = {"b": [1.0, 2.0], "a": {"z": 1, "k": [0.5]}}
    text = dumps_canonical(doc)
    assert text == dumps_canonical(dict(reversed(list(doc.items()))))
    assert text.endswith("\n")
    assert text.index('"a"') < text.index('"b"')


def test_dumps_canonical_rejects_nan():
    with pytest.raises(ValueError):
        dumps_canonical({"x": float("nan")})


@pytest.mark.parametrize("mutate, message", [
    (lambda d: d.pop("version"), "version"),
    (lambda d: d.update(version=2), "version"),
    (lambda d: d.update(dims=[2, 0]), "dims"),
    (lambda d: d.update(dims="2"), "dims"),
    (lambda d: d.update(amplitudes=[[0.5, 0.0, 0.0]] * 2), "pair"),
    (lambda d: d.update(amplitudes=[["a", 0.0]] * 2), "pair"),
    (lambda d: d.update(amplitudes=[[1.0, 0.0]]), "amplitudes"),
    (lambda d: d.update(label=7), "label"),
])
def test_state_document_validation(tmp_path, mutate, message):
    doc = {"version": 1, "dims": [2],
           "amplitudes": [[1.0, 0.0], [0.0, 0.0]], "label": "x"}
    mutate(doc)
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(InvalidArgs, match=message):
        load_state(path)


def test_non_json_and_non_object_inputs(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(InvalidArgs, match="not valid JSON"):
        load_state(path)
    path.write_text("[1, 2]")
    with pytest.raises(InvalidArgs, match="top level"):
        load_state(path)


def test_density_entry_count_checked(tmp_path):
    doc = {"version": 1, "dims": [2], "entries": [[1.0, 0.0]] * 3}
    path = tmp_path / "d.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(InvalidArgs, match="entries"):
        load_density(path)


def test_decomposition_document_validation(tmp_path):
    base = {
        "version": 1, "dims": [2, 2], "coefficients": [1.0],
        "subsystems": [[[[1.0, 0.0], [0.0, 0.0]]],
                       [[[1.0, 0.0], [0.0, 0.0]]]],
    }
    path = tmp_path / "dec.json"

    doc = dict(base)
    doc["coefficients"] = "1"
    path.write_text(json.dumps(doc))
    with pytest.raises(InvalidArgs, match="coefficients"):
        load_decomposition(path)

    doc = dict(base)
    doc["subsystems"] = doc["subsystems"][:1]
    path.write_text(json.dumps(doc))
    with pytest.raises(InvalidArgs, match="one family per subsystem"):
        load_decomposition(path)

    doc = dict(base)
    doc["subsystems"] = [doc["subsystems"][0] * 2, doc["subsystems"][1]]
    path.write_text(json.dumps(doc))
    with pytest.raises(InvalidArgs, match="one vector per coefficient"):
        load_decomposition(path)


def test_report_to_dict_rejection_shape():
    doc = report_to_dict(check_decomposable(w_state()))
    assert doc["verdict"] == "NotDecomposable"
    assert doc["decomposable"] is False
    assert doc["stage"] == "SNotScaledUnitary"
    assert doc["decomposition"] is None
    ss = np.array(doc["witness"]["ss_dagger"])
    assert np.max(np.abs(ss - np.array([[1, 1], [1, 2]]) / 3)) < 1e-12
    assert set(doc["tolerances"]) == {"rank_tol", "diag_tol", "orth_tol",
                                      "seed"}
    # whole document must be serializable deterministically
    text = dumps_canonical(doc)
    assert json.loads(text)["stage"] == "SNotScaledUnitary"


def test_report_to_dict_acceptance_shape():
    doc = report_to_dict(check_decomposable(ghz(3)))
    assert doc["decomposable"] is True
    assert doc["decomposition"]["dims"] == [2, 2, 2]
    assert doc["residuals"]["reconstruction"] < 1e-12
    dumps_canonical(doc)
