"""Pauli-string algebra: validation, the diagonal/nondiagonal split,
vectorized string application, expectation values."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gvqe import pauli, sim
from gvqe.errors import ResourceLimitError, ValidationError

from .oracles import dense_hamiltonian, dense_pauli

strings = st.integers(1, 5).flatmap(
    lambda n: st.text(alphabet="IXYZ", min_size=n, max_size=n))
strings3 = st.text(alphabet="IXYZ", min_size=3, max_size=3)
coefficients = st.floats(-10, 10, allow_nan=False).filter(lambda c: abs(c) > 1e-9)


def random_state(n_qubits: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    amps = rng.standard_normal(1 << n_qubits) + 1j * rng.standard_normal(1 << n_qubits)
    return amps / np.linalg.norm(amps)


# ---------------------------------------------------------------------------
# terms and validation

def test_term_validation_rejects_bad_letters():
    with pytest.raises(ValidationError):
        pauli.PauliTerm("XQ", 1.0)
    with pytest.raises(ValidationError):
        pauli.PauliTerm("", 1.0)
    with pytest.raises(ValidationError):
        pauli.PauliTerm("xz", 1.0)


def test_term_diagonal_flag():
    assert pauli.PauliTerm("IZZI", 0.5).is_diagonal()
    assert not pauli.PauliTerm("IXZI", 0.5).is_diagonal()
    assert not pauli.PauliTerm("IYII", 0.5).is_diagonal()


def test_split_partitions_terms():
    h = pauli.split([("ZI", 0.3), ("XX", 0.1), ("II", -0.7), ("ZZ", 0.2)], 2)
    assert [t.paulis for t in h.diagonal_terms] == ["ZI", "ZZ"]
    assert [t.paulis for t in h.nondiagonal_terms] == ["XX"]
    assert h.identity_offset == pytest.approx(-0.7, abs=0.0)


def test_split_merges_duplicates_and_drops_tiny():
    h = pauli.split([("XY", 0.4), ("XY", -0.4 + 1e-15), ("ZI", 1.0)], 2)
    assert [t.paulis for t in h.terms] == ["ZI"]


def test_split_rejects_length_mismatch():
    with pytest.raises(ValidationError):
        pauli.split([("XYZ", 1.0)], 2)


def test_split_canonical_order_is_lexicographic():
    h = pauli.split([("ZZ", 1.0), ("IZ", 1.0), ("ZI", 1.0), ("YY", 1.0),
                     ("XX", 1.0)], 2)
    assert [t.paulis for t in h.diagonal_terms] == ["IZ", "ZI", "ZZ"]
    assert [t.paulis for t in h.nondiagonal_terms] == ["XX", "YY"]


def test_hamiltonian_rejects_misplaced_terms():
    with pytest.raises(ValidationError):
        pauli.QubitHamiltonian(
            n_qubits=2,
            diagonal_terms=(pauli.PauliTerm("XX", 1.0),),
            nondiagonal_terms=(),
            identity_offset=0.0)
    with pytest.raises(ValidationError):
        pauli.QubitHamiltonian(
            n_qubits=2,
            diagonal_terms=(),
            nondiagonal_terms=(pauli.PauliTerm("ZZ", 1.0),),
            identity_offset=0.0)


# ---------------------------------------------------------------------------
# application kernels against dense oracles

@given(strings)
@settings(max_examples=60, deadline=None)
def test_apply_pauli_string_matches_dense(string):
    psi = random_state(len(string), seed=7)
    expected = dense_pauli(string) @ psi
    np.testing.assert_allclose(pauli.apply_pauli_string(string, psi),
                               expected, atol=1e-12)


@given(strings.filter(lambda s: set(s) <= set("IZ")))
@settings(max_examples=30, deadline=None)
def test_diagonal_values_match_dense(string):
    diag = pauli.diagonal_values(string, len(string))
    np.testing.assert_allclose(diag, np.diag(dense_pauli(string)).real,
                               atol=1e-12)


@given(st.lists(st.tuples(strings3, coefficients), min_size=1, max_size=6),
       st.integers(0, 2**31 - 1))
@settings(max_examples=40, deadline=None)
def test_expectation_matches_dense(pairs, seed):
    h = pauli.split(pairs, 3)
    psi = random_state(3, seed)
    dense = dense_hamiltonian(pauli.terms_as_pairs(h), 3, h.identity_offset)
    expected = float(np.real(psi.conj() @ dense @ psi))
    state = sim.StateVector(3, psi)
    assert pauli.expectation(h, state) == pytest.approx(expected, abs=1e-10)


def test_string_to_dense_qubit_order():
    # qubit 0 is the least significant bit: Z on qubit 0 of 2 gives
    # diag(+1, -1, +1, -1) over basis order |00>, |01>, |10>, |11>
    matrix = pauli.string_to_dense("ZI")
    np.testing.assert_allclose(np.diag(matrix).real, [1, -1, 1, -1])


def test_to_dense_respects_cap():
    h = pauli.split([("Z", 1.0)], 1)
    with pytest.raises(ResourceLimitError):
        pauli.to_dense(h, max_qubits=0)


def test_expectation_real_for_hermitian(h2_equilibrium):
    h = h2_equilibrium.hamiltonian
    psi = random_state(h.n_qubits, seed=3)
    value = pauli.expectation(h, sim.StateVector(h.n_qubits, psi))
    assert isinstance(value, float)
    dense = dense_hamiltonian(pauli.terms_as_pairs(h), h.n_qubits,
                              h.identity_offset)
    assert value == pytest.approx(float(np.real(psi.conj() @ dense @ psi)),
                                  abs=1e-10)
