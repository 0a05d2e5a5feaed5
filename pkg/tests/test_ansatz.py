"""Ansatz structure: layer composition and ordering, parameter packing,
particle-number conservation, and the hardware-efficient layout."""

from __future__ import annotations

import numpy as np
import pytest

from gvqe import ansatz, chem, oracle, pauli, sim
from gvqe.errors import ValidationError

from .oracles import dense_hamiltonian, dense_expm


def number_operator_expectation(state: sim.StateVector) -> float:
    occupations = np.bitwise_count(np.arange(state.amplitudes.size, dtype=np.uint64))
    return float(np.sum(np.abs(state.amplitudes) ** 2 * occupations))


# ---------------------------------------------------------------------------
# Hamiltonian-alternating family

def test_ha_parameter_count_is_2d(h2_equilibrium):
    h = h2_equilibrium.hamiltonian
    for d in (1, 2, 3, 5):
        circuit = ansatz.build_ha(h, d, h2_equilibrium.hf_state_index)
        assert circuit.parameter_count == 2 * d
        assert circuit.depth == d


def test_ha_layer_structure(h2_equilibrium):
    h = h2_equilibrium.hamiltonian
    d = 3
    circuit = ansatz.build_ha(h, d, h2_equilibrium.hf_state_index)
    n_cor = len(h.nondiagonal_terms)
    assert len(circuit.gates) == d * (n_cor + 1)
    for k in range(d):
        layer = circuit.gates[k * (n_cor + 1):(k + 1) * (n_cor + 1)]
        # correlation factors first, diagonal evolution closes the layer
        for gate, term in zip(layer[:-1], h.nondiagonal_terms):
            assert isinstance(gate, sim.PauliRotationGate)
            assert gate.paulis == term.paulis
            assert gate.scale == term.coefficient
            assert gate.param_index == d + k          # phi_k
        assert isinstance(layer[-1], sim.DiagonalEvolutionGate)
        assert layer[-1].param_index == k             # theta_k


def test_ha_trotter_factors_in_canonical_order(h3p_point):
    h = h3p_point.hamiltonian
    circuit = ansatz.build_ha(h, 1, h3p_point.hf_state_index)
    strings = [g.paulis for g in circuit.gates if isinstance(g, sim.PauliRotationGate)]
    assert strings == sorted(strings)
    assert strings == [t.paulis for t in h.nondiagonal_terms]


def test_ha_matches_dense_layer_product(h2_equilibrium):
    """d=1 circuit equals expm of the diagonal part applied after the
    ordered product of single-term exponentials."""
    built = h2_equilibrium
    h = built.hamiltonian
    circuit = ansatz.build_ha(h, 1, built.hf_state_index)
    rng = np.random.default_rng(11)
    theta, phi = rng.uniform(-1.0, 1.0, size=2)

    dim = 1 << h.n_qubits
    ref = np.zeros(dim, dtype=np.complex128)
    ref[built.hf_state_index] = 1.0
    for term in h.nondiagonal_terms:
        generator = dense_hamiltonian([(term.paulis, term.coefficient)], h.n_qubits)
        ref = dense_expm(-1j * phi * generator) @ ref
    diag_pairs = [(t.paulis, t.coefficient) for t in h.diagonal_terms]
    ref = dense_expm(-1j * theta * dense_hamiltonian(diag_pairs, h.n_qubits)) @ ref

    out = ansatz.apply(circuit, np.array([theta, phi]))
    np.testing.assert_allclose(out.amplitudes, ref, atol=1e-12)


def test_ha_conserves_particle_number_exactly_for_single_group(h2_equilibrium):
    # All four correlation strings act on the same qubit quartet and
    # mutually commute, so the factored product conserves occupation
    # exactly even at large angles.
    built = h2_equilibrium
    circuit = ansatz.build_ha(built.hamiltonian, 3, built.hf_state_index)
    rng = np.random.default_rng(5)
    state = ansatz.apply(circuit, rng.uniform(-2.0, 2.0, circuit.parameter_count))
    assert number_operator_expectation(state) == pytest.approx(built.n_electrons, abs=1e-12)
    sector = oracle.sector_indices(built.hamiltonian.n_qubits, built.n_electrons)
    mass = np.sum(np.abs(state.amplitudes[sector]) ** 2)
    assert mass == pytest.approx(1.0, abs=1e-12)


def test_ha_number_conservation_high_order_for_interleaved_groups(h3p_point):
    # Individual hopping strings change occupation; only their group sums
    # conserve it. The one-step factorization therefore leaks between
    # sectors, but the leakage vanishes to high order in the parameters.
    built = h3p_point
    circuit = ansatz.build_ha(built.hamiltonian, 3, built.hf_state_index)
    rng = np.random.default_rng(5)
    small = ansatz.apply(circuit, rng.uniform(-0.2, 0.2, circuit.parameter_count))
    assert number_operator_expectation(small) == pytest.approx(built.n_electrons, abs=1e-12)
    # theta (diagonal evolution) alone never mixes occupations
    params = np.zeros(circuit.parameter_count)
    params[:circuit.depth] = [0.7, -1.3, 2.1]
    diag_only = ansatz.apply(circuit, params)
    assert number_operator_expectation(diag_only) == pytest.approx(
        built.n_electrons, abs=1e-14)


def test_ha_zero_params_is_reference(h2_equilibrium):
    circuit = ansatz.build_ha(h2_equilibrium.hamiltonian, 2, h2_equilibrium.hf_state_index)
    state = ansatz.apply(circuit, np.zeros(4))
    expected = np.zeros(state.amplitudes.size, dtype=np.complex128)
    expected[h2_equilibrium.hf_state_index] = 1.0
    np.testing.assert_allclose(state.amplitudes, expected, atol=1e-15)


def test_ha_validation(h2_equilibrium):
    h = h2_equilibrium.hamiltonian
    with pytest.raises(ValidationError):
        ansatz.build_ha(h, 0, 3)
    with pytest.raises(ValidationError):
        ansatz.build_ha(h, 1, 16)
    with pytest.raises(ValidationError):
        ansatz.build_ha(h, 1, -1)


def test_ha_degenerate_warning():
    diag = pauli.split([pauli.PauliTerm("ZI", 0.5), pauli.PauliTerm("IZ", -0.25)], 2)
    h = pauli.QubitHamiltonian(2, diag.diagonal_terms, (), 0.0)
    with pytest.warns(ansatz.DegenerateAnsatzWarning):
        ansatz.build_ha(h, 1, 1)


# ---------------------------------------------------------------------------
# hardware-efficient family

def test_he_parameter_count():
    for n, d in [(2, 1), (4, 2), (4, 5), (6, 3)]:
        circuit = ansatz.build_he(n, d)
        assert circuit.parameter_count == 2 * n * (d + 1)
        assert circuit.input_state_index == 0


def test_he_gate_layout():
    n, d = 3, 2
    circuit = ansatz.build_he(n, d)
    gates = list(circuit.gates)
    assert len(gates) == (d + 1) * 2 * n + d * (n - 1)
    cursor = 0
    for block in range(d + 1):
        for q in range(n):
            rx, ry = gates[cursor], gates[cursor + 1]
            cursor += 2
            assert isinstance(rx, sim.PauliRotationGate) and rx.scale == 0.5
            assert isinstance(ry, sim.PauliRotationGate) and ry.scale == 0.5
            assert rx.paulis[q] == "X" and rx.paulis.count("I") == n - 1
            assert ry.paulis[q] == "Y" and ry.paulis.count("I") == n - 1
        if block < d:
            for q in range(n - 1):
                cz = gates[cursor]
                cursor += 1
                assert isinstance(cz, sim.ControlledZGate)
                assert (cz.qubit_a, cz.qubit_b) == (q, q + 1)
    assert cursor == len(gates)
    # parameter indices are consecutive and each used exactly once
    indices = [g.param_index for g in gates if isinstance(g, sim.PauliRotationGate)]
    assert sorted(indices) == list(range(circuit.parameter_count))


def test_he_zero_params_is_all_zeros_state():
    circuit = ansatz.build_he(3, 1)
    state = ansatz.apply(circuit, np.zeros(circuit.parameter_count))
    expected = np.zeros(8, dtype=np.complex128)
    expected[0] = 1.0
    np.testing.assert_allclose(state.amplitudes, expected, atol=1e-15)


def test_he_validation():
    with pytest.raises(ValidationError):
        ansatz.build_he(1, 1)
    with pytest.raises(ValidationError):
        ansatz.build_he(4, 0)


def test_he_does_not_conserve_particle_number():
    circuit = ansatz.build_he(4, 1)
    rng = np.random.default_rng(3)
    state = ansatz.apply(circuit, rng.uniform(0.1, 1.0, circuit.parameter_count))
    occ = number_operator_expectation(state)
    assert abs(occ - round(occ)) > 1e-3


# ---------------------------------------------------------------------------
# shared apply() checks

def test_apply_rejects_wrong_parameter_shape(h2_equilibrium):
    circuit = ansatz.build_ha(h2_equilibrium.hamiltonian, 2, h2_equilibrium.hf_state_index)
    with pytest.raises(ValidationError):
        ansatz.apply(circuit, np.zeros(3))


def test_apply_rejects_wrong_qubit_count(h2_equilibrium):
    circuit = ansatz.build_ha(h2_equilibrium.hamiltonian, 1, h2_equilibrium.hf_state_index)
    with pytest.raises(ValidationError):
        ansatz.apply(circuit, np.zeros(2), sim.basis_state(3, 0))
