"""File formats: canonical JSON, deterministic hashing, Hamiltonian/model
round-trips, parse validation, and the CSV curve layout with full-precision
floats."""

from __future__ import annotations

import json

import numpy as np
import pytest

from gvqe import chem, formats, interp
from gvqe.errors import ParseError


def test_canonical_json_is_deterministic_and_sorted():
    a = formats.canonical_json({"b": 1, "a": [1.5, 2]})
    b = formats.canonical_json({"a": [1.5, 2], "b": 1})
    assert a == b
    assert a.endswith("\n")
    assert a.index('"a"') < a.index('"b"')


def test_plain_converts_numpy_types():
    obj = formats.plain({"v": np.float64(1.5), "a": np.arange(3),
                         "n": np.int32(7), "flag": np.bool_(True)})
    assert json.dumps(obj)  # serializable
    assert obj == {"v": 1.5, "a": [0, 1, 2], "n": 7, "flag": True}


def test_config_hash_sensitivity():
    base = {"family": "h2", "depth": 1, "seed": 7}
    assert formats.config_sha256(base) == formats.config_sha256(dict(base))
    assert formats.config_sha256(base) != formats.config_sha256(
        {**base, "depth": 2})
    assert len(formats.config_sha256(base)) == 64


# ---------------------------------------------------------------------------
# Hamiltonian files

@pytest.fixture()
def h2_record(h2_equilibrium):
    built = h2_equilibrium
    from gvqe import pauli
    return formats.hamiltonian_record(
        n_qubits=built.hamiltonian.n_qubits,
        n_electrons=built.n_electrons,
        label=built.label,
        x_value=built.x_value,
        x_units=built.x_units,
        identity_offset=built.hamiltonian.identity_offset,
        terms=pauli.terms_as_pairs(built.hamiltonian),
        reference_energies=built.reference_energies,
        provenance="unit test")


def test_hamiltonian_round_trip(tmp_path, h2_record):
    path = tmp_path / formats.hamiltonian_filename("h2", 0.7414)
    formats.write_hamiltonian_file(path, h2_record, "abc123", seed=7)
    loaded = formats.read_hamiltonian_file(path)
    assert loaded["n_qubits"] == 4
    assert loaded["n_electrons"] == 2
    assert loaded["label"] == "h2"
    assert loaded["x_value"] == 0.7414
    assert loaded["identity_offset"] == h2_record["identity_offset"]
    assert loaded["terms"] == h2_record["terms"]
    assert loaded["provenance"] == "unit test"
    raw = json.loads(path.read_text())
    assert raw["format_version"] == formats.FORMAT_VERSION
    assert raw["config_sha256"] == "abc123"
    assert raw["seed"] == 7


def test_hamiltonian_write_is_byte_identical(tmp_path, h2_record):
    p1 = tmp_path / "a.json"
    p2 = tmp_path / "b.json"
    formats.write_hamiltonian_file(p1, h2_record, "abc", seed=1)
    formats.write_hamiltonian_file(p2, h2_record, "abc", seed=1)
    assert p1.read_bytes() == p2.read_bytes()


def test_coefficients_survive_round_trip_exactly(tmp_path):
    # repr-based serialization must reproduce every double bit-for-bit
    rng = np.random.default_rng(0)
    coeffs = list(rng.normal(size=40)) + [1e-17, -3.0000000000000004, 0.1]
    record = formats.hamiltonian_record(
        n_qubits=2, n_electrons=1, label="synthetic", x_value=1.0,
        x_units="angstrom", identity_offset=np.pi,
        terms=[("ZI", c) for c in coeffs[:1]] + [("IZ", c) for c in coeffs[1:2]]
              + [("ZZ", coeffs[2])])
    path = tmp_path / "h.json"
    formats.write_hamiltonian_file(path, record, "x", seed=0)
    loaded = formats.read_hamiltonian_file(path)
    for orig, got in zip(record["terms"], loaded["terms"]):
        assert got["coeff"] == orig["coeff"]  # exact equality
    assert loaded["identity_offset"] == np.pi


@pytest.mark.parametrize("mutate, message", [
    (lambda r: r.pop("n_qubits"), "missing"),
    (lambda r: r.update(format_version=99), "format_version"),
    (lambda r: r.update(n_qubits=-1), "n_qubits"),
    (lambda r: r.update(n_qubits=2.5), "n_qubits"),
    (lambda r: r.update(terms="oops"), "terms"),
    (lambda r: r["terms"].append({"pauli": "XW", "coeff": 1.0}), "IXYZ"),
    (lambda r: r["terms"].append({"pauli": "XYZ", "coeff": 1.0}), "length"),
    (lambda r: r["terms"].append({"pauli": "XY"}), "coeff"),
    (lambda r: r["terms"].append({"pauli": "XY", "coeff": "one"}), "number"),
    (lambda r: r.update(label=3), "label"),
])
def test_hamiltonian_parse_errors(tmp_path, mutate, message):
    record = formats.hamiltonian_record(
        n_qubits=2, n_electrons=1, label="t", x_value=1.0,
        x_units="angstrom", identity_offset=0.0, terms=[("ZI", 0.5)])
    path = tmp_path / "h.json"
    formats.write_hamiltonian_file(path, record, "x", seed=0)
    raw = json.loads(path.read_text())
    mutate(raw)
    path.write_text(json.dumps(raw))
    with pytest.raises(ParseError, match=message):
        formats.read_hamiltonian_file(path)


def test_unreadable_file_raises_parse_error(tmp_path):
    path = tmp_path / "nope.json"
    with pytest.raises(ParseError):
        formats.read_hamiltonian_file(path)
    path.write_text("[1, 2, 3]")
    with pytest.raises(ParseError, match="object"):
        formats.read_hamiltonian_file(path)


def test_hamiltonian_filename_shortest_repr():
    assert formats.hamiltonian_filename("h2", 0.5) == "h2_x0.5.json"
    assert formats.hamiltonian_filename("h2", 1.0) == "h2_x1.0.json"
    assert formats.hamiltonian_filename("h3_linear", 2.2) == "h3_linear_x2.2.json"


# ---------------------------------------------------------------------------
# model files

def test_model_round_trip(tmp_path):
    xs = [0.5, 1.0, 1.5, 2.0]
    rng = np.random.default_rng(1)
    params = rng.normal(size=(4, 6))
    energies = rng.normal(size=4) - 2.0
    model = interp.fit(xs, params, training_energies=energies,
                       family_label="h2", depth=3,
                       metadata={"note": "round trip"})
    path = tmp_path / "model.json"
    formats.write_model_file(path, model, "deadbeef", seed=3)
    loaded = formats.read_model_file(path)
    np.testing.assert_array_equal(loaded.training_xs, model.training_xs)
    np.testing.assert_array_equal(loaded.optimal_params, model.optimal_params)
    np.testing.assert_array_equal(loaded.training_energies, model.training_energies)
    assert loaded.family_label == model.family_label
    assert loaded.depth == model.depth
    assert loaded.ansatz_kind == model.ansatz_kind
    assert loaded.metadata["note"] == "round trip"
    # refit spline evaluates identically
    grid = np.linspace(0.5, 2.0, 23)
    np.testing.assert_array_equal(loaded.interpolants.evaluate(grid),
                                  model.interpolants.evaluate(grid))


def test_model_parse_error(tmp_path):
    path = tmp_path / "model.json"
    path.write_text('{"family_label": "h2"}')
    with pytest.raises(ParseError):
        formats.read_model_file(path)


# ---------------------------------------------------------------------------
# curve CSV

def test_curve_round_trip(tmp_path):
    points = [
        interp.CurvePoint(x=0.5, energy_interp=-1.05, energy_hf=-1.0,
                          energy_fci=-1.1, energy_direct_interp=-1.049,
                          params=np.array([0.1, 0.2])),
        interp.CurvePoint(x=0.7414, energy_interp=-1.13672341758,
                          energy_hf=-1.11, energy_fci=-1.1367234178,
                          energy_direct_interp=-1.1367,
                          params=np.array([0.11, 0.19])),
    ]
    path = tmp_path / "curve.csv"
    formats.write_curve_file(path, points, "angstrom", "cafe", seed=9)
    data = formats.read_curve_file(path)
    np.testing.assert_array_equal(data["x"], [0.5, 0.7414])
    np.testing.assert_array_equal(data["E_interp"], [-1.05, -1.13672341758])
    np.testing.assert_array_equal(data["param_0"], [0.1, 0.11])
    assert data["_meta"]["config_sha256"] == "cafe"
    assert data["_meta"]["seed"] == "9"
    header = path.read_text().splitlines()
    [column_row] = [line for line in header if line.startswith("x[")]
    columns = column_row.split(",")
    assert columns[0] == "x[angstrom]"
    assert columns[1] == "E_interp[hartree]"
    assert len(columns) == 5 + 2  # five energies/x plus parameter_count


def test_records_and_json_files(tmp_path):
    records = [{"x_value": 0.5, "best_energy": -1.0}]
    path = formats.write_records_file(tmp_path / "r.json", records, "c0ffee", 2)
    raw = json.loads(path.read_text())
    assert raw["records"] == records
    assert raw["config_sha256"] == "c0ffee"
    single = formats.write_json_file(tmp_path / "s.json", {"k": 1}, "c0ffee", 2)
    assert json.loads(single.read_text())["k"] == 1
