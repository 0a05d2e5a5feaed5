"""Ansatz circuit construction.

Two families:

- Hamiltonian-alternating (HA): d layers, each applying the one-step
  Trotterized correlation evolution first and the exact diagonal (mean
  field) evolution second,

      |psi(theta, phi)> = prod_{k=1..d} U_HF(theta_k) U_cor~(phi_k) |psi_HF>,

  where U_HF(t) = exp(-i t H_diag) is exact (diagonal) and U_cor~(p) is the
  product over nondiagonal terms Q, in canonical order, of exp(-i p h_Q Q).
  Layer k=1 acts on the state first.  Parameters are packed as
  [theta_1..theta_d, phi_1..phi_d]; parameter_count = 2d.

- Hardware-efficient (HE): d blocks of per-qubit Rx, Ry rotations followed
  by a linear CZ chain on (0,1),(1,2),...,(n-2,n-1), plus one final
  rotation layer without an entangler; input |0...0>.  Rotations use the
  half-angle convention Rx(t) = exp(-i t X/2), Rx before Ry on each qubit.
  parameter_count = 2 * n * (d + 1).

The diagonal evolution conserves computational-basis occupations exactly.
The correlation factor conserves particle number exactly only when all of
its strings mutually commute (true for a single excitation group, e.g. H2);
with several interleaved groups the one-step factorization conserves it
approximately, to high order in the parameters.  HE does not depend on the
Hamiltonian at all and conserves nothing.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import sim
from .errors import ValidationError
from .pauli import QubitHamiltonian

KIND_HAMILTONIAN_ALTERNATING = "hamiltonian_alternating"
KIND_HARDWARE_EFFICIENT = "hardware_efficient"


class DegenerateAnsatzWarning(UserWarning):
    """The Hamiltonian has no nondiagonal part; the HA circuit only ever
    rephases the reference state."""


@dataclass(frozen=True)
class AnsatzCircuit:
    kind: str
    depth: int
    n_qubits: int
    parameter_count: int
    gates: tuple
    input_state_index: int

    def input_state(self) -> sim.StateVector:
        return sim.basis_state(self.n_qubits, self.input_state_index)


def build_ha(h: QubitHamiltonian, depth: int, hf_state_index: int) -> AnsatzCircuit:
    """Hamiltonian-alternating circuit bound to ``h``, referenced on the
    basis state ``hf_state_index`` (the Jordan-Wigner image of the HF
    determinant)."""
    if depth < 1:
        raise ValidationError(f"depth must be >= 1, got {depth}")
    if not 0 <= hf_state_index < (1 << h.n_qubits):
        raise ValidationError(
            f"hf_state_index {hf_state_index} out of range for {h.n_qubits} qubits")
    if not h.nondiagonal_terms:
        warnings.warn(
            "Hamiltonian has no nondiagonal terms; the alternating ansatz "
            "cannot leave the reference state", DegenerateAnsatzWarning)
    # the diagonal eigenvalue table is shared by every layer
    energies = sim.diagonal_energy_table(h.diagonal_terms, h.n_qubits)
    gates = []
    for k in range(depth):
        theta_index = k
        phi_index = depth + k
        for term in h.nondiagonal_terms:
            gates.append(sim.PauliRotationGate(term.paulis, term.coefficient, phi_index))
        gates.append(sim.DiagonalEvolutionGate(energies, theta_index))
    return AnsatzCircuit(
        kind=KIND_HAMILTONIAN_ALTERNATING,
        depth=depth,
        n_qubits=h.n_qubits,
        parameter_count=2 * depth,
        gates=tuple(gates),
        input_state_index=hf_state_index,
    )


def build_he(n_qubits: int, depth: int) -> AnsatzCircuit:
    """Hardware-efficient circuit; independent of any Hamiltonian."""
    if depth < 1:
        raise ValidationError(f"depth must be >= 1, got {depth}")
    if n_qubits < 2:
        raise ValidationError(f"n_qubits must be >= 2, got {n_qubits}")
    gates = []
    index = 0

    def rotation_layer(index):
        for q in range(n_qubits):
            x_string = "".join("X" if j == q else "I" for j in range(n_qubits))
            y_string = "".join("Y" if j == q else "I" for j in range(n_qubits))
            gates.append(sim.PauliRotationGate(x_string, 0.5, index))
            gates.append(sim.PauliRotationGate(y_string, 0.5, index + 1))
            index += 2
        return index

    for _ in range(depth):
        index = rotation_layer(index)
        for q in range(n_qubits - 1):
            gates.append(sim.ControlledZGate(q, q + 1))
    index = rotation_layer(index)
    return AnsatzCircuit(
        kind=KIND_HARDWARE_EFFICIENT,
        depth=depth,
        n_qubits=n_qubits,
        parameter_count=index,
        gates=tuple(gates),
        input_state_index=0,
    )


def apply(circuit: AnsatzCircuit, params, input_state: sim.StateVector | None = None) -> sim.StateVector:
    """Run the circuit; defaults to its own reference input state."""
    params = np.asarray(params, dtype=np.float64)
    if params.shape != (circuit.parameter_count,):
        raise ValidationError(
            f"parameter vector has shape {params.shape}, "
            f"expected {(circuit.parameter_count,)}")
    state = circuit.input_state() if input_state is None else input_state
    if state.n_qubits != circuit.n_qubits:
        raise ValidationError(
            f"input state has {state.n_qubits} qubits, circuit has {circuit.n_qubits}")
    return sim.apply_circuit(circuit.gates, params, state)
