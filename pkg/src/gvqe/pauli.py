"""Pauli-string Hamiltonians: terms, diagonal/nondiagonal split, fast kernels.

Conventions used throughout the package:

- A Pauli string is a str over "IXYZ"; position j acts on qubit j.
- Basis index bit j is qubit j (little-endian), so qubit 0 is the least
  significant bit of a statevector index.
- A string is *diagonal* when it contains only I and Z.  The diagonal part
  of a molecular Hamiltonian plays the role of the mean-field piece and the
  nondiagonal remainder is the correlation piece.
- Identity strings are folded into a scalar ``identity_offset`` rather than
  stored as terms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ResourceLimitError, ValidationError

PAULI_CHARS = frozenset("IXYZ")

# merged coefficients below this magnitude are dropped by split()
COEFF_DROP_TOLERANCE = 1e-12

# expectation values must be real up to this absolute imaginary residual
_IMAG_TOLERANCE = 1e-12

_DENSE_QUBIT_CAP = 14


def _validate_string(paulis: str) -> None:
    if not paulis:
        raise ValidationError("empty Pauli string")
    bad = set(paulis) - PAULI_CHARS
    if bad:
        raise ValidationError(f"invalid Pauli letters {sorted(bad)} in {paulis!r}")


@dataclass(frozen=True)
class PauliTerm:
    """One real-weighted Pauli string."""

    paulis: str
    coefficient: float

    def __post_init__(self):
        _validate_string(self.paulis)
        if not np.isfinite(self.coefficient):
            raise ValidationError(f"non-finite coefficient for {self.paulis!r}")

    @property
    def n_qubits(self) -> int:
        return len(self.paulis)

    def is_diagonal(self) -> bool:
        return not (set(self.paulis) & {"X", "Y"})


@dataclass(frozen=True)
class QubitHamiltonian:
    """Split Hamiltonian: H = identity_offset + diagonal + nondiagonal.

    Both term tuples are kept in canonical (lexicographic, I<X<Y<Z) order
    with unique strings, which makes every downstream computation —
    Trotter products in particular — deterministic.
    """

    n_qubits: int
    diagonal_terms: tuple[PauliTerm, ...]
    nondiagonal_terms: tuple[PauliTerm, ...]
    identity_offset: float = 0.0

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValidationError(f"n_qubits must be >= 1, got {self.n_qubits}")
        for group, want_diag in ((self.diagonal_terms, True), (self.nondiagonal_terms, False)):
            strings = [t.paulis for t in group]
            for term in group:
                if term.n_qubits != self.n_qubits:
                    raise ValidationError(
                        f"term {term.paulis!r} has length {term.n_qubits}, expected {self.n_qubits}")
                if term.is_diagonal() != want_diag:
                    raise ValidationError(f"term {term.paulis!r} in the wrong partition")
                if set(term.paulis) == {"I"}:
                    raise ValidationError("identity string must live in identity_offset")
            if strings != sorted(strings) or len(set(strings)) != len(strings):
                raise ValidationError("terms must be unique and canonically ordered")

    @property
    def terms(self) -> tuple[PauliTerm, ...]:
        """All non-identity terms, diagonal first; canonical within each group."""
        return self.diagonal_terms + self.nondiagonal_terms

    @property
    def n_terms(self) -> int:
        return len(self.diagonal_terms) + len(self.nondiagonal_terms)


def split(terms: Iterable[PauliTerm | tuple[str, float]], n_qubits: int) -> QubitHamiltonian:
    """Merge duplicate strings, fold identities into the offset, partition
    into diagonal/nondiagonal, and order canonically.

    Accepts PauliTerm objects or (paulis, coefficient) pairs.  Coefficients
    of merged strings below COEFF_DROP_TOLERANCE are dropped.
    """
    if n_qubits < 1:
        raise ValidationError(f"n_qubits must be >= 1, got {n_qubits}")
    merged: dict[str, float] = {}
    offset = 0.0
    for item in terms:
        if isinstance(item, PauliTerm):
            paulis, coeff = item.paulis, item.coefficient
        else:
            paulis, coeff = item
            _validate_string(paulis)
        if len(paulis) != n_qubits:
            raise ValidationError(
                f"term {paulis!r} has length {len(paulis)}, expected {n_qubits}")
        coeff = float(coeff)
        if not np.isfinite(coeff):
            raise ValidationError(f"non-finite coefficient for {paulis!r}")
        if set(paulis) == {"I"}:
            offset += coeff
        else:
            merged[paulis] = merged.get(paulis, 0.0) + coeff
    diag = []
    nondiag = []
    for paulis in sorted(merged):
        coeff = merged[paulis]
        if abs(coeff) < COEFF_DROP_TOLERANCE:
            continue
        term = PauliTerm(paulis, coeff)
        (diag if term.is_diagonal() else nondiag).append(term)
    return QubitHamiltonian(n_qubits, tuple(diag), tuple(nondiag), offset)


def string_masks(paulis: str) -> tuple[int, int, int]:
    """Bit masks driving P|b> = i^n_y * (-1)^popcount(b' & yz) |b'> with
    b' = b XOR flip: (flip_mask, yz_mask, n_y)."""
    flip = 0
    yz = 0
    n_y = 0
    for j, ch in enumerate(paulis):
        if ch in "XY":
            flip |= 1 << j
        if ch in "YZ":
            yz |= 1 << j
        if ch == "Y":
            n_y += 1
    return flip, yz, n_y


def apply_pauli_string(paulis: str, amplitudes: np.ndarray) -> np.ndarray:
    """Return P|psi> for one Pauli string (new array, input untouched)."""
    flip, yz, n_y = string_masks(paulis)
    dim = amplitudes.shape[0]
    idx = np.arange(dim, dtype=np.uint64)
    src = idx ^ np.uint64(flip)
    parity = (np.bitwise_count(src & np.uint64(yz)) & 1).astype(np.int8)
    sign = 1 - 2 * parity.astype(np.complex128)
    return (1j ** (n_y % 4)) * sign * amplitudes[src]


def diagonal_values(paulis: str, n_qubits: int) -> np.ndarray:
    """Eigenvalues of a diagonal (I/Z) string on each basis state."""
    _, yz, n_y = string_masks(paulis)
    if n_y or (set(paulis) & {"X", "Y"}):
        raise ValidationError(f"{paulis!r} is not diagonal")
    idx = np.arange(1 << n_qubits, dtype=np.uint64)
    parity = (np.bitwise_count(idx & np.uint64(yz)) & 1).astype(np.int8)
    return (1 - 2 * parity).astype(np.float64)


def expectation(h: QubitHamiltonian, psi) -> float:
    """<psi|H|psi> including identity_offset.

    ``psi`` is a StateVector or a complex amplitude array.  The result must
    be real to within 1e-12; the imaginary residual is checked and dropped.
    """
    amps = np.asarray(getattr(psi, "amplitudes", psi))
    if amps.shape != (1 << h.n_qubits,):
        raise ValidationError(
            f"state has dimension {amps.shape}, expected {(1 << h.n_qubits,)}")
    total = 0.0 + 0.0j
    for term in h.terms:
        total += term.coefficient * np.vdot(amps, apply_pauli_string(term.paulis, amps))
    if abs(total.imag) > _IMAG_TOLERANCE:
        raise ValidationError(
            f"expectation has imaginary residual {total.imag:.3e}; Hermiticity broken")
    norm_sq = float(np.real(np.vdot(amps, amps)))
    return float(total.real) + h.identity_offset * norm_sq


_PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def string_to_dense(paulis: str) -> np.ndarray:
    """Dense matrix of one string; qubit 0 is the least significant index bit."""
    out = np.eye(1, dtype=complex)
    for ch in paulis:
        out = np.kron(_PAULI_MATRICES[ch], out)
    return out


def to_dense(h: QubitHamiltonian, max_qubits: int = _DENSE_QUBIT_CAP) -> np.ndarray:
    """Dense 2^n x 2^n matrix of H; refuses beyond max_qubits."""
    if h.n_qubits > max_qubits:
        raise ResourceLimitError(
            f"dense form of {h.n_qubits} qubits exceeds the {max_qubits}-qubit cap")
    dim = 1 << h.n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for term in h.terms:
        out += term.coefficient * string_to_dense(term.paulis)
    out += h.identity_offset * np.eye(dim)
    return out


def terms_as_pairs(h: QubitHamiltonian) -> list[tuple[str, float]]:
    """Serializable (paulis, coefficient) view, canonical order."""
    return [(t.paulis, t.coefficient) for t in h.terms]
