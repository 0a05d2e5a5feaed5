"""Exact ground-state reference: sector-restricted diagonalization of a
qubit Hamiltonian.

"FCI energy" here means the minimum eigenvalue within the particle-number
sector (computational basis states of fixed Hamming weight), matching the
quantum-chemistry convention.  Since the transformed molecular Hamiltonians
conserve particle number, restriction is an exact projection — and it is
verified, not assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import pauli, sim
from .errors import ConvergenceError, ResourceLimitError, SectorViolationError, ValidationError

_QUBIT_CAP = 14
_DENSE_SECTOR_CAP = 4096
_RESIDUAL_TOLERANCE = 1e-9
_LEAKAGE_TOLERANCE = 1e-10


@dataclass(frozen=True)
class SectorSpec:
    """Where to look for the ground state: the Hamming-weight-n_electrons
    subspace when restrict is true, the whole space otherwise."""

    n_electrons: int
    restrict: bool = True


def sector_indices(n_qubits: int, n_electrons: int) -> np.ndarray:
    """Ascending basis-state indices of Hamming weight n_electrons."""
    if not 0 <= n_electrons <= n_qubits:
        raise ValidationError(
            f"n_electrons must lie in [0, {n_qubits}], got {n_electrons}")
    states = np.arange(1 << n_qubits, dtype=np.uint64)
    return states[np.bitwise_count(states) == n_electrons]


class _SectorOperator:
    """H projected onto a sorted list of basis states, with the leaked
    (out-of-sector) matrix elements accumulated for the conservation check.

    Individual Pauli terms may leave the sector as long as their sum does
    not (XX and YY hopping terms cancel each other's leakage), so leakage
    is summed across terms before judging.
    """

    def __init__(self, h: pauli.QubitHamiltonian, states: np.ndarray):
        self.states = states
        self.dim = states.size
        self.offset = h.identity_offset
        diag = np.zeros(self.dim)
        for term in h.diagonal_terms:
            _, yz, _ = pauli.string_masks(term.paulis)
            signs = 1.0 - 2.0 * (np.bitwise_count(states & np.uint64(yz)) & 1)
            diag += term.coefficient * signs
        self.diagonal = diag

        sources: list[np.ndarray] = []
        positions: list[np.ndarray] = []
        amplitudes: list[np.ndarray] = []
        leaked: dict[tuple[int, int], complex] = {}
        for term in h.nondiagonal_terms:
            flip, yz, n_y = pauli.string_masks(term.paulis)
            phase = term.coefficient * (1j) ** (n_y % 4)
            targets = states ^ np.uint64(flip)
            signs = 1.0 - 2.0 * (np.bitwise_count(states & np.uint64(yz)) & 1)
            amp = phase * signs
            pos = np.searchsorted(states, targets)
            inside = (pos < self.dim) & (states[np.minimum(pos, self.dim - 1)] == targets)
            src = np.arange(self.dim)
            sources.append(src[inside])
            positions.append(pos[inside])
            amplitudes.append(amp[inside])
            for s, t, a in zip(src[~inside], targets[~inside], amp[~inside]):
                key = (int(s), int(t))
                leaked[key] = leaked.get(key, 0.0) + a
        self._sources = np.concatenate(sources) if sources else np.zeros(0, dtype=int)
        self._positions = np.concatenate(positions) if positions else np.zeros(0, dtype=int)
        self._amplitudes = np.concatenate(amplitudes) if amplitudes else np.zeros(0, dtype=complex)
        self.max_leakage = max((abs(v) for v in leaked.values()), default=0.0)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = (self.diagonal + self.offset) * v
        np.add.at(out, self._positions, self._amplitudes * v[self._sources])
        return out

    def dense(self) -> np.ndarray:
        m = np.diag((self.diagonal + self.offset).astype(complex))
        np.add.at(m, (self._positions, self._sources), self._amplitudes)
        return m


def _lanczos_ground(matvec, dim: int, max_krylov: int = 400,
                    tolerance: float = _RESIDUAL_TOLERANCE) -> tuple[float, np.ndarray]:
    """Smallest eigenpair by Lanczos with full reorthogonalization."""
    rng = np.random.default_rng(2024)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    v /= np.linalg.norm(v)
    basis = [v]
    alphas: list[float] = []
    betas: list[float] = []
    for k in range(min(max_krylov, dim)):
        w = matvec(basis[k])
        alpha = float(np.real(np.vdot(basis[k], w)))
        alphas.append(alpha)
        w = w - alpha * basis[k]
        if k > 0:
            w = w - betas[k - 1] * basis[k - 1]
        for _ in range(2):  # full reorthogonalization, twice for safety
            for u in basis:
                w = w - np.vdot(u, w) * u
        beta = float(np.linalg.norm(w))
        t = np.diag(alphas).astype(float)
        if betas:
            off = np.array(betas)
            t[np.arange(len(betas)), np.arange(1, len(alphas))] = off
            t[np.arange(1, len(alphas)), np.arange(len(betas))] = off
        evals, evecs = np.linalg.eigh(t)
        ground = evecs[:, 0]
        residual_bound = abs(beta * ground[-1])
        if residual_bound < 0.1 * tolerance or beta < 1e-14 or k + 1 == dim:
            vec = np.zeros(dim, dtype=complex)
            for coeff, u in zip(ground, basis):
                vec += coeff * u
            vec /= np.linalg.norm(vec)
            return float(evals[0]), vec
        betas.append(beta)
        basis.append(w / beta)
    raise ConvergenceError(
        f"Lanczos did not reach residual {tolerance:g} within {max_krylov} vectors")


def ground_state(h: pauli.QubitHamiltonian, sector: SectorSpec) -> tuple[float, sim.StateVector]:
    """Minimum eigenvalue and eigenvector of H within the sector, the vector
    embedded back into the full 2^n space.

    Dense Hermitian solve for sector dimension <= 4096, Lanczos with full
    reorthogonalization above that; either way the full-space residual
    ||H v - E v|| < 1e-9 is asserted before returning.
    """
    if h.n_qubits > _QUBIT_CAP:
        raise ResourceLimitError(
            f"exact reference capped at {_QUBIT_CAP} qubits, got {h.n_qubits}")
    if sector.restrict:
        states = sector_indices(h.n_qubits, sector.n_electrons)
    else:
        if not 0 <= sector.n_electrons <= h.n_qubits:
            raise ValidationError(
                f"n_electrons must lie in [0, {h.n_qubits}], got {sector.n_electrons}")
        states = np.arange(1 << h.n_qubits, dtype=np.uint64)
    op = _SectorOperator(h, states)
    if sector.restrict and op.max_leakage > _LEAKAGE_TOLERANCE:
        raise SectorViolationError(
            "Hamiltonian does not conserve particle number: out-of-sector "
            f"matrix element of magnitude {op.max_leakage:.3e}")
    if op.dim <= _DENSE_SECTOR_CAP:
        evals, evecs = np.linalg.eigh(op.dense())
        energy = float(evals[0])
        sector_vec = evecs[:, 0]
    else:
        energy, sector_vec = _lanczos_ground(op.matvec, op.dim)

    full = np.zeros(1 << h.n_qubits, dtype=complex)
    full[states] = sector_vec
    state = sim.StateVector(h.n_qubits, full)
    residual = float(np.linalg.norm(
        sim.HamiltonianApplier(h).apply(state.amplitudes, include_offset=True)
        - energy * state.amplitudes))
    if residual >= _RESIDUAL_TOLERANCE:
        raise ConvergenceError(
            f"eigenpair residual {residual:.3e} exceeds {_RESIDUAL_TOLERANCE:g}")
    return energy, state


def hf_energy(h: pauli.QubitHamiltonian, hf_state_index: int) -> float:
    """Expectation of H on a computational basis state: only the diagonal
    part and the identity offset contribute."""
    if not 0 <= hf_state_index < (1 << h.n_qubits):
        raise ValidationError(
            f"basis-state index {hf_state_index} out of range for "
            f"{h.n_qubits} qubits")
    index = np.uint64(hf_state_index)
    energy = h.identity_offset
    for term in h.diagonal_terms:
        _, yz, _ = pauli.string_masks(term.paulis)
        parity = int(np.bitwise_count(index & np.uint64(yz))) & 1
        energy += term.coefficient * (1.0 - 2.0 * parity)
    return float(energy)
