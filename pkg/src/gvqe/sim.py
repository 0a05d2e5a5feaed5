"""Statevector simulator: exact Pauli-rotation and diagonal-evolution kernels,
fast Hamiltonian application, and adjoint-mode analytic gradients.

Gate set (all that the two ansatz families need):

- PauliRotationGate     exp(-i * scale * param * P) for a Pauli string P
- DiagonalEvolutionGate exp(-i * param * D) for D = sum of diagonal terms
- ControlledZGate       parameter-free entangler

Gates carry a ``param_index`` into a shared parameter vector; several gates
may share one index (Trotter factors of one layer angle), in which case
their gradient contributions accumulate.  ``param_index`` is None for
unparameterized gates.

A statevector is single-writer: kernels mutate the owning array in place
and callers copy when they need to keep the input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import pauli
from .errors import ValidationError

_NORM_TOLERANCE = 1e-10


@dataclass
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise ValidationError(
                f"amplitude array has shape {self.amplitudes.shape}, "
                f"expected {(1 << self.n_qubits,)}")

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def check_normalized(self) -> None:
        if abs(self.norm() - 1.0) > _NORM_TOLERANCE:
            raise ValidationError(f"state norm drifted to {self.norm():.12f}")


def basis_state(n_qubits: int, index: int) -> StateVector:
    if not 0 <= index < (1 << n_qubits):
        raise ValidationError(
            f"basis index {index} out of range for {n_qubits} qubits")
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(n_qubits, amps)


# ---------------------------------------------------------------------------
# gates

@dataclass(frozen=True, eq=False)
class PauliRotationGate:
    """exp(-i * scale * params[param_index] * P); applied exactly via
    cos(a)|psi> - i sin(a) P|psi> (P^2 = 1)."""

    paulis: str
    scale: float
    param_index: int


@dataclass(frozen=True, eq=False)
class DiagonalEvolutionGate:
    """exp(-i * params[param_index] * D) with D diagonal; ``energies`` holds
    the 2^n eigenvalues of D, shared across layers that reuse the same D."""

    energies: np.ndarray
    param_index: int


@dataclass(frozen=True, eq=False)
class ControlledZGate:
    qubit_a: int
    qubit_b: int
    param_index: None = None


Gate = PauliRotationGate | DiagonalEvolutionGate | ControlledZGate


def diagonal_energy_table(diagonal_terms, n_qubits: int) -> np.ndarray:
    """Per-basis-state eigenvalue of sum_k c_k Z-string_k (identity excluded)."""
    table = np.zeros(1 << n_qubits, dtype=np.float64)
    for term in diagonal_terms:
        table += term.coefficient * pauli.diagonal_values(term.paulis, n_qubits)
    return table


def _gate_angle(gate: Gate, params: np.ndarray) -> float:
    if isinstance(gate, PauliRotationGate):
        return gate.scale * float(params[gate.param_index])
    if isinstance(gate, DiagonalEvolutionGate):
        return float(params[gate.param_index])
    return 0.0


def apply_gate(amps: np.ndarray, gate: Gate, params: np.ndarray, inverse: bool = False) -> np.ndarray:
    """Apply one gate in place; returns the same array."""
    sign = -1.0 if inverse else 1.0
    if isinstance(gate, PauliRotationGate):
        angle = sign * _gate_angle(gate, params)
        rotated = pauli.apply_pauli_string(gate.paulis, amps)
        amps *= math.cos(angle)
        amps -= (1j * math.sin(angle)) * rotated
        return amps
    if isinstance(gate, DiagonalEvolutionGate):
        angle = sign * _gate_angle(gate, params)
        amps *= np.exp(-1j * angle * gate.energies)
        return amps
    if isinstance(gate, ControlledZGate):
        dim = amps.shape[0]
        idx = np.arange(dim, dtype=np.uint64)
        both = ((idx >> np.uint64(gate.qubit_a)) & (idx >> np.uint64(gate.qubit_b)) & np.uint64(1))
        amps *= (1.0 - 2.0 * both.astype(np.float64))
        return amps
    raise ValidationError(f"unknown gate {gate!r}")


def apply_circuit(gates: Sequence[Gate], params: np.ndarray, state: StateVector) -> StateVector:
    """Apply gates in order to a copy of ``state``."""
    out = state.copy()
    for gate in gates:
        apply_gate(out.amplitudes, gate, params)
    return out


# ---------------------------------------------------------------------------
# Hamiltonian application

class HamiltonianApplier:
    """Precomputed H|psi> kernel for repeated energy/gradient evaluations.

    The diagonal part collapses into one eigenvalue table; each nondiagonal
    string keeps its masks.  Application order is canonical (diagonal table
    first, then nondiagonal terms in stored order) so energies are
    bit-for-bit reproducible.
    """

    def __init__(self, h: pauli.QubitHamiltonian):
        self.hamiltonian = h
        self.n_qubits = h.n_qubits
        self.identity_offset = h.identity_offset
        self.diagonal_table = diagonal_energy_table(h.diagonal_terms, h.n_qubits)
        self._nondiag = []
        for term in h.nondiagonal_terms:
            flip, yz, n_y = pauli.string_masks(term.paulis)
            phase = term.coefficient * (1j ** (n_y % 4))
            self._nondiag.append((np.uint64(flip), np.uint64(yz), phase))

    def apply(self, amps: np.ndarray, include_offset: bool = False) -> np.ndarray:
        """Return H|psi| as a new array (offset excluded unless asked)."""
        dim = amps.shape[0]
        idx = np.arange(dim, dtype=np.uint64)
        out = self.diagonal_table * amps
        for flip, yz, phase in self._nondiag:
            src = idx ^ flip
            parity = (np.bitwise_count(src & yz) & 1).astype(np.float64)
            out += phase * (1.0 - 2.0 * parity) * amps[src]
        if include_offset:
            out += self.identity_offset * amps
        return out

    def expectation(self, state: StateVector | np.ndarray) -> float:
        amps = np.asarray(getattr(state, "amplitudes", state))
        value = np.vdot(amps, self.apply(amps))
        if abs(value.imag) > 1e-12:
            raise ValidationError(
                f"expectation has imaginary residual {value.imag:.3e}")
        return float(value.real) + self.identity_offset * float(np.real(np.vdot(amps, amps)))


# ---------------------------------------------------------------------------
# adjoint gradient

def _generator_apply(gate: Gate, amps: np.ndarray) -> tuple[np.ndarray, float]:
    """(G|psi>, scale) for gate exp(-i * scale * p * G)."""
    if isinstance(gate, PauliRotationGate):
        return pauli.apply_pauli_string(gate.paulis, amps), gate.scale
    if isinstance(gate, DiagonalEvolutionGate):
        return gate.energies * amps, 1.0
    raise ValidationError(f"gate {gate!r} has no generator")


def energy_and_gradient(circuit, applier: HamiltonianApplier, params: np.ndarray,
                        input_state: StateVector) -> tuple[float, np.ndarray]:
    """Energy and dE/dparams via one forward sweep plus one adjoint sweep.

    For psi_L = U_L ... U_1 |in> and U_k = exp(-i p_{j(k)} s_k G_k),

        dE/dp_j = sum_{k: j(k)=j} 2 s_k Im <lambda_k| G_k |psi_k>,

    with psi_k the state after gate k and lambda_k = U_{k+1}^+ ... U_L^+ H psi_L.
    Both vectors are back-propagated gate by gate, so memory stays at two
    statevectors regardless of depth.  The gradient differentiates the
    circuit exactly as implemented (the Trotterized product, not the ideal
    exponential it approximates).
    """
    params = np.asarray(params, dtype=np.float64)
    if params.shape != (circuit.parameter_count,):
        raise ValidationError(
            f"parameter vector has shape {params.shape}, "
            f"expected {(circuit.parameter_count,)}")
    psi = input_state.copy().amplitudes
    for gate in circuit.gates:
        apply_gate(psi, gate, params)
    lam = applier.apply(psi)
    energy = float(np.real(np.vdot(psi, lam))) + applier.identity_offset
    grad = np.zeros(circuit.parameter_count, dtype=np.float64)
    for gate in reversed(circuit.gates):
        if gate.param_index is not None:
            gpsi, scale = _generator_apply(gate, psi)
            grad[gate.param_index] += 2.0 * scale * float(np.vdot(lam, gpsi).imag)
        apply_gate(psi, gate, params, inverse=True)
        apply_gate(lam, gate, params, inverse=True)
    return energy, grad


def adjoint_gradient(circuit, h: pauli.QubitHamiltonian, params: np.ndarray,
                     input_state: StateVector) -> np.ndarray:
    """Gradient only; see energy_and_gradient."""
    return energy_and_gradient(circuit, HamiltonianApplier(h), params, input_state)[1]
