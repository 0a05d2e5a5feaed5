"""Minimal-basis hydrogen chemistry: STO-3G integrals, restricted
Hartree-Fock, and the Jordan-Wigner qubit Hamiltonian.

Scope is deliberately narrow — s-type Gaussians only, which covers every
built-in hydrogen system.  Anything else (water and friends) enters through
Hamiltonian-file ingestion; see ``formats``.

All public energies are in Hartree, geometries in Angstrom (converted
internally to bohr).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import formats, pauli
from .errors import ConvergenceError, UnsupportedElementError, ValidationError

BOHR_PER_ANGSTROM = 1.0 / 0.52917721092  # CODATA 2010 bohr radius

# Standard STO-3G hydrogen contraction (basis-set-exchange values; the
# zeta=1.24 scaled s-type set).
_H_EXPONENTS = (3.425250914, 0.6239137298, 0.1688554040)
_H_COEFFS = (0.1543289673, 0.5353281423, 0.4446345422)

_ATOMIC_NUMBERS = {
    "H": 1, "He": 2, "Li": 3, "Be": 4, "B": 5, "C": 6, "N": 7, "O": 8,
    "F": 9, "Ne": 10,
}

_INTEGRAL_DROP = 1e-12  # one-/two-electron integrals below this are skipped


# ---------------------------------------------------------------------------
# molecules

@dataclass(frozen=True)
class MoleculeSpec:
    """Atoms as (symbol, (x, y, z)) in Angstrom."""

    atoms: tuple[tuple[str, tuple[float, float, float]], ...]
    charge: int = 0
    label: str = ""

    @property
    def n_electrons(self) -> int:
        total = 0
        for symbol, _ in self.atoms:
            if symbol not in _ATOMIC_NUMBERS:
                raise ValidationError(f"unknown element {symbol!r}")
            total += _ATOMIC_NUMBERS[symbol]
        return total - self.charge


@dataclass(frozen=True)
class HamiltonianFamily:
    """A one-parameter family x -> molecule, e.g. a bond-length scan."""

    label: str
    x_units: str
    molecule_at: Callable[[float], MoleculeSpec]


def h2_molecule(r: float) -> MoleculeSpec:
    return MoleculeSpec((("H", (0.0, 0.0, 0.0)), ("H", (r, 0.0, 0.0))),
                        charge=0, label="h2")


def h3_linear_molecule(r: float) -> MoleculeSpec:
    return MoleculeSpec((("H", (-r, 0.0, 0.0)), ("H", (0.0, 0.0, 0.0)),
                         ("H", (r, 0.0, 0.0))), charge=0, label="h3_linear")


def h3_triangle_plus_molecule(r: float) -> MoleculeSpec:
    return MoleculeSpec((("H", (0.0, 0.0, 0.0)), ("H", (r, 0.0, 0.0)),
                         ("H", (r / 2.0, math.sqrt(3.0) / 2.0 * r, 0.0))),
                        charge=1, label="h3_triangle_plus")


def h2o_bend_molecule(beta_degrees: float, r: float = 0.96) -> MoleculeSpec:
    """Water bend family, recorded for ingestion metadata only: oxygen at
    the origin, hydrogens at (r, 0) and (r cos beta, r sin beta).  Building
    its Hamiltonian in-package is refused (p orbitals are out of scope)."""
    beta = math.radians(beta_degrees)
    return MoleculeSpec((("O", (0.0, 0.0, 0.0)), ("H", (r, 0.0, 0.0)),
                         ("H", (r * math.cos(beta), r * math.sin(beta), 0.0))),
                        charge=0, label="h2o_bend")


BUILTIN_FAMILIES = {
    "h2": HamiltonianFamily("h2", "angstrom", h2_molecule),
    "h3_linear": HamiltonianFamily("h3_linear", "angstrom", h3_linear_molecule),
    "h3_triangle_plus": HamiltonianFamily("h3_triangle_plus", "angstrom",
                                          h3_triangle_plus_molecule),
    "h2o_bend": HamiltonianFamily("h2o_bend", "degrees", h2o_bend_molecule),
}


def builtin_family(name: str) -> HamiltonianFamily:
    try:
        return BUILTIN_FAMILIES[name]
    except KeyError:
        raise ValidationError(
            f"unknown family {name!r}; choose from {sorted(BUILTIN_FAMILIES)} "
            "or ingest Hamiltonian files") from None


# ---------------------------------------------------------------------------
# STO-3G integrals (s-type closed forms)

@dataclass(frozen=True)
class IntegralSet:
    """AO-basis integrals: overlap S, kinetic T, nuclear attraction V,
    chemist-notation two-electron (ij|kl), and the nuclear repulsion."""

    overlap: np.ndarray
    kinetic: np.ndarray
    nuclear_attraction: np.ndarray
    two_electron: np.ndarray
    nuclear_repulsion: float

    @property
    def n_basis(self) -> int:
        return self.overlap.shape[0]

    @property
    def core_hamiltonian(self) -> np.ndarray:
        return self.kinetic + self.nuclear_attraction


def boys_f0(t: float) -> float:
    """F0(t) = integral_0^1 exp(-t u^2) du = (1/2) sqrt(pi/t) erf(sqrt(t)),
    with the t -> 0 series to avoid the 0/0."""
    if t < 1e-12:
        return 1.0 - t / 3.0
    return 0.5 * math.sqrt(math.pi / t) * math.erf(math.sqrt(t))


def _contracted_s(center_bohr: np.ndarray) -> list[tuple[float, float]]:
    """(exponent, coefficient) primitives, normalized so <phi|phi> = 1."""
    prims = []
    for a, c in zip(_H_EXPONENTS, _H_COEFFS):
        prims.append((a, c * (2.0 * a / math.pi) ** 0.75))
    self_overlap = 0.0
    for a1, c1 in prims:
        for a2, c2 in prims:
            self_overlap += c1 * c2 * (math.pi / (a1 + a2)) ** 1.5
    scale = 1.0 / math.sqrt(self_overlap)
    return [(a, c * scale) for a, c in prims]


def sto3g_integrals(mol: MoleculeSpec) -> IntegralSet:
    """All AO integrals for an all-hydrogen molecule.

    Closed forms for s-type Gaussians: with p = a + b, mu = ab/p and the
    Gaussian product center P = (aA + bB)/p,

        S_ab   = (pi/p)^{3/2} exp(-mu |A-B|^2)
        T_ab   = mu (3 - 2 mu |A-B|^2) S_ab
        V_ab^C = -(2 pi / p) exp(-mu |A-B|^2) Z_C F0(p |P-C|^2)
        (ab|cd) = 2 pi^{5/2} / (pq sqrt(p+q)) exp(-mu_ab|A-B|^2 - mu_cd|C-D|^2)
                  * F0(pq/(p+q) |P-Q|^2)
    """
    for symbol, _ in mol.atoms:
        if symbol != "H":
            raise UnsupportedElementError(
                f"built-in integrals support hydrogen only, got {symbol!r}; "
                "supply this system as a Hamiltonian file instead")
    centers = [np.asarray(xyz, dtype=float) * BOHR_PER_ANGSTROM for _, xyz in mol.atoms]
    shells = [_contracted_s(c) for c in centers]
    n = len(centers)

    S = np.zeros((n, n))
    T = np.zeros((n, n))
    V = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            A, B = centers[i], centers[j]
            rab2 = float(np.dot(A - B, A - B))
            s = t = v = 0.0
            for a, ca in shells[i]:
                for b, cb in shells[j]:
                    p = a + b
                    mu = a * b / p
                    ov = (math.pi / p) ** 1.5 * math.exp(-mu * rab2)
                    s += ca * cb * ov
                    t += ca * cb * mu * (3.0 - 2.0 * mu * rab2) * ov
                    P = (a * A + b * B) / p
                    pref = ca * cb * (2.0 * math.pi / p) * math.exp(-mu * rab2)
                    for center in centers:  # every nucleus has Z = 1
                        rpc2 = float(np.dot(P - center, P - center))
                        v -= pref * boys_f0(p * rpc2)
            S[i, j] = s
            T[i, j] = t
            V[i, j] = v

    eri = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(n):
            A, B = centers[i], centers[j]
            rab2 = float(np.dot(A - B, A - B))
            for k in range(n):
                for l in range(n):
                    C, D = centers[k], centers[l]
                    rcd2 = float(np.dot(C - D, C - D))
                    total = 0.0
                    for a, ca in shells[i]:
                        for b, cb in shells[j]:
                            p = a + b
                            P = (a * A + b * B) / p
                            eab = math.exp(-a * b / p * rab2)
                            for c, cc in shells[k]:
                                for d, cd in shells[l]:
                                    q = c + d
                                    Q = (c * C + d * D) / q
                                    rpq2 = float(np.dot(P - Q, P - Q))
                                    total += (ca * cb * cc * cd
                                              * 2.0 * math.pi ** 2.5
                                              / (p * q * math.sqrt(p + q))
                                              * eab * math.exp(-c * d / q * rcd2)
                                              * boys_f0(p * q / (p + q) * rpq2))
                    eri[i, j, k, l] = total

    e_nuc = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            e_nuc += 1.0 / float(np.linalg.norm(centers[i] - centers[j]))
    return IntegralSet(S, T, V, eri, e_nuc)


# ---------------------------------------------------------------------------
# restricted Hartree-Fock

@dataclass(frozen=True)
class ScfResult:
    hf_energy: float
    orbital_coefficients: np.ndarray  # columns = MOs, ascending energy
    orbital_energies: np.ndarray
    nuclear_repulsion: float
    n_electrons: int
    converged: bool
    iterations: int


def rhf(integrals: IntegralSet, n_electrons: int, max_iterations: int = 200,
        density_tolerance: float = 1e-10) -> ScfResult:
    """Closed-shell SCF with symmetric orthogonalization and a core-
    Hamiltonian guess; the first five iterations damp the density 50/50 to
    tame oscillations in stretched geometries."""
    if n_electrons < 2 or n_electrons % 2 != 0:
        raise ValidationError(
            f"restricted HF needs a positive even electron count, got {n_electrons}")
    n = integrals.n_basis
    if n_electrons > 2 * n:
        raise ValidationError(
            f"{n_electrons} electrons do not fit in {n} spatial orbitals")
    hcore = integrals.core_hamiltonian
    eri = integrals.two_electron
    w, U = np.linalg.eigh(integrals.overlap)
    if w.min() < 1e-10:
        raise ValidationError("overlap matrix is numerically singular")
    X = U @ np.diag(w ** -0.5) @ U.T
    n_occ = n_electrons // 2
    density = np.zeros((n, n))
    fock = hcore
    converged = False
    iterations = 0
    for iteration in range(max_iterations):
        iterations = iteration + 1
        coulomb = np.einsum("rs,pqrs->pq", density, eri)
        exchange = np.einsum("rs,prqs->pq", density, eri)
        fock = hcore + coulomb - 0.5 * exchange
        eps, C_prime = np.linalg.eigh(X.T @ fock @ X)
        C = X @ C_prime
        occupied = C[:, :n_occ]
        new_density = 2.0 * occupied @ occupied.T
        if iteration < 5:
            new_density = 0.5 * new_density + 0.5 * density
        delta = float(np.abs(new_density - density).max())
        density = new_density
        if delta < density_tolerance:
            converged = True
            break
    if not converged:
        raise ConvergenceError(
            f"SCF failed to converge in {max_iterations} iterations "
            f"(last density change {delta:.3e})")
    electronic = 0.5 * float(np.sum(density * (hcore + fock)))
    return ScfResult(
        hf_energy=electronic + integrals.nuclear_repulsion,
        orbital_coefficients=C,
        orbital_energies=eps,
        nuclear_repulsion=integrals.nuclear_repulsion,
        n_electrons=n_electrons,
        converged=True,
        iterations=iterations,
    )


# ---------------------------------------------------------------------------
# Jordan-Wigner transformation

# single-qubit Pauli products: (left, right) -> (phase, result)
_PAULI_MULT = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("X", "X"): (1, "I"), ("X", "Y"): (1j, "Z"), ("X", "Z"): (-1j, "Y"),
    ("Y", "I"): (1, "Y"), ("Y", "X"): (-1j, "Z"), ("Y", "Y"): (1, "I"), ("Y", "Z"): (1j, "X"),
    ("Z", "I"): (1, "Z"), ("Z", "X"): (1j, "Y"), ("Z", "Y"): (-1j, "X"), ("Z", "Z"): (1, "I"),
}


def _multiply_strings(a: dict[str, complex], b: dict[str, complex]) -> dict[str, complex]:
    out: dict[str, complex] = {}
    for sa, ca in a.items():
        for sb, cb in b.items():
            phase = ca * cb
            chars = []
            for x, y in zip(sa, sb):
                ph, ch = _PAULI_MULT[(x, y)]
                phase *= ph
                chars.append(ch)
            key = "".join(chars)
            out[key] = out.get(key, 0.0) + phase
    return out


def _jw_ladder(index: int, n_qubits: int, dagger: bool) -> dict[str, complex]:
    """a_index^(+) = (X -+ iY)/2 at the site, Z string on lower qubits."""
    prefix = "Z" * index
    suffix = "I" * (n_qubits - index - 1)
    sign = -0.5j if dagger else 0.5j
    return {prefix + "X" + suffix: 0.5, prefix + "Y" + suffix: sign}


def jordan_wigner(scf: ScfResult, integrals: IntegralSet) -> tuple[pauli.QubitHamiltonian, int]:
    """Qubit Hamiltonian in the MO spin-orbital basis plus the HF state index.

    Spin orbitals interleave spins over ascending orbital energy: qubit 2p
    is (MO p, alpha) and 2p+1 is (MO p, beta); occupied spin orbitals are
    then the lowest n_electrons qubits, so the HF determinant maps to the
    basis state 2^n_electrons - 1.  Nuclear repulsion joins the identity
    offset.  Two-body input uses physicist ordering <pq|rs> = (pr|qs).
    """
    C = scf.orbital_coefficients
    h_mo = C.T @ integrals.core_hamiltonian @ C
    g_mo = np.einsum("pi,qj,pqrs,rk,sl->ijkl", C, C, integrals.two_electron,
                     C, C, optimize=True)
    n_spin = 2 * C.shape[1]
    h_so, g_pairs = _spin_orbital_terms(h_mo, g_mo, n_spin)
    accumulator: dict[str, complex] = {}

    def add(op: dict[str, complex], coeff: float) -> None:
        for s, c in op.items():
            accumulator[s] = accumulator.get(s, 0.0) + coeff * c

    ladders: dict[tuple[int, bool], dict[str, complex]] = {}

    def ladder(index: int, dagger: bool) -> dict[str, complex]:
        key = (index, dagger)
        if key not in ladders:
            ladders[key] = _jw_ladder(index, n_spin, dagger)
        return ladders[key]

    for (p, q), value in h_so.items():
        add(_multiply_strings(ladder(p, True), ladder(q, False)), value)
    for (p, q, r, s), value in g_pairs.items():
        op = _multiply_strings(
            _multiply_strings(ladder(p, True), ladder(q, True)),
            _multiply_strings(ladder(s, False), ladder(r, False)))
        add(op, 0.5 * value)

    terms = []
    identity = scf.nuclear_repulsion
    for string, coeff in accumulator.items():
        if abs(coeff.imag) > 1e-10:
            raise ValidationError(
                f"non-Hermitian JW accumulation at {string!r}: {coeff}")
        if set(string) == {"I"}:
            identity += coeff.real
        else:
            terms.append((string, coeff.real))
    terms.append(("I" * n_spin, identity))
    h = pauli.split(terms, n_spin)
    return h, (1 << scf.n_electrons) - 1


def _spin_orbital_terms(h_mo: np.ndarray, g_mo: np.ndarray, n_spin: int):
    """Nonzero one-body h_pq and two-body <pq|rs> in spin-orbital labels."""
    n_mo = h_mo.shape[0]
    h_so: dict[tuple[int, int], float] = {}
    for p in range(n_mo):
        for q in range(n_mo):
            if abs(h_mo[p, q]) < _INTEGRAL_DROP:
                continue
            for spin in (0, 1):
                h_so[(2 * p + spin, 2 * q + spin)] = float(h_mo[p, q])
    g_so: dict[tuple[int, int, int, int], float] = {}
    for P in range(n_mo):
        for R in range(n_mo):
            for Q in range(n_mo):
                for S_ in range(n_mo):
                    value = g_mo[P, R, Q, S_]  # chemist (PR|QS) = <PQ|RS>
                    if abs(value) < _INTEGRAL_DROP:
                        continue
                    for spin_a in (0, 1):
                        for spin_b in (0, 1):
                            p = 2 * P + spin_a
                            q = 2 * Q + spin_b
                            r = 2 * R + spin_a
                            s = 2 * S_ + spin_b
                            if p == q or r == s:
                                continue
                            g_so[(p, q, r, s)] = float(value)
    return h_so, g_so


# ---------------------------------------------------------------------------
# assembled problems

@dataclass(frozen=True)
class BuiltHamiltonian:
    """Everything downstream stages need for one x: the split Hamiltonian,
    the HF reference basis state, and bookkeeping metadata."""

    hamiltonian: pauli.QubitHamiltonian
    hf_state_index: int
    n_electrons: int
    label: str
    x_value: float
    x_units: str
    scf: ScfResult | None = None
    reference_energies: dict = field(default_factory=dict)
    provenance: str = ""


def build_molecular_hamiltonian(family: HamiltonianFamily, x: float) -> BuiltHamiltonian:
    """Integrals -> RHF -> Jordan-Wigner for one family point."""
    mol = family.molecule_at(x)
    integrals = sto3g_integrals(mol)
    scf = rhf(integrals, mol.n_electrons)
    h, hf_index = jordan_wigner(scf, integrals)
    return BuiltHamiltonian(
        hamiltonian=h,
        hf_state_index=hf_index,
        n_electrons=mol.n_electrons,
        label=family.label,
        x_value=float(x),
        x_units=family.x_units,
        scf=scf,
        reference_energies={"hf": scf.hf_energy},
        provenance=f"built-in family {family.label} (STO-3G, RHF, Jordan-Wigner)",
    )


def ingest_hamiltonian(path) -> BuiltHamiltonian:
    """Load an exchanged Hamiltonian file; re-splits terms so canonical
    ordering never depends on the producer."""
    record = formats.read_hamiltonian_file(path)
    h = pauli.split(
        [(t["pauli"], t["coeff"]) for t in record["terms"]]
        + [("I" * record["n_qubits"], record["identity_offset"])],
        record["n_qubits"])
    n_electrons = record["n_electrons"]
    if n_electrons > record["n_qubits"]:
        raise ValidationError(
            f"n_electrons {n_electrons} exceeds qubit count {record['n_qubits']}")
    return BuiltHamiltonian(
        hamiltonian=h,
        hf_state_index=(1 << n_electrons) - 1,
        n_electrons=n_electrons,
        label=record["label"],
        x_value=record["x_value"],
        x_units=record["x_units"],
        scf=None,
        reference_energies=record.get("reference_energies") or {},
        provenance=record.get("provenance") or "",
    )
