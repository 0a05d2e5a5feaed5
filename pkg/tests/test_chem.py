"""Chemistry chain: Boys function, minimal-basis integrals against
literature values, restricted Hartree-Fock, and the Jordan-Wigner qubit
Hamiltonian against a dense second-quantized oracle."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gvqe import chem, oracle, pauli
from gvqe.errors import UnsupportedElementError, ValidationError

from .oracles import (SZABO_OSTLUND_H2, boys_f0_quadrature,
                      dense_fermionic_hamiltonian, pauli_coefficients,
                      spin_orbital_integrals)

BOHR = 1.0 / chem.BOHR_PER_ANGSTROM  # Angstrom per bohr


@given(st.floats(0.0, 60.0, allow_nan=False))
@settings(max_examples=60, deadline=None)
def test_boys_matches_quadrature(t):
    assert chem.boys_f0(t) == pytest.approx(boys_f0_quadrature(t), abs=1e-8)


def test_boys_small_t_series():
    assert chem.boys_f0(0.0) == pytest.approx(1.0, abs=1e-12)
    assert chem.boys_f0(1e-13) == pytest.approx(1.0, abs=1e-10)


# ---------------------------------------------------------------------------
# integrals: frozen literature anchors at R = 1.4 bohr

@pytest.fixture(scope="module")
def szabo_integrals():
    return chem.sto3g_integrals(chem.h2_molecule(1.4 * BOHR))


def test_overlap_anchor(szabo_integrals):
    s = szabo_integrals.overlap
    assert s[0, 0] == pytest.approx(1.0, abs=1e-10)
    assert s[0, 1] == pytest.approx(SZABO_OSTLUND_H2["overlap_12"], abs=2e-4)
    np.testing.assert_allclose(s, s.T, atol=1e-14)


def test_kinetic_anchor(szabo_integrals):
    t = szabo_integrals.kinetic
    assert t[0, 0] == pytest.approx(SZABO_OSTLUND_H2["kinetic_11"], abs=2e-4)
    assert t[0, 1] == pytest.approx(SZABO_OSTLUND_H2["kinetic_12"], abs=2e-4)


def test_attraction_anchor(szabo_integrals):
    single = chem.sto3g_integrals(
        chem.MoleculeSpec((("H", (0.0, 0.0, 0.0)),), charge=0, label="h"))
    own = single.nuclear_attraction[0, 0]
    assert own == pytest.approx(SZABO_OSTLUND_H2["attraction_11_own"], abs=2e-4)
    other = szabo_integrals.nuclear_attraction[0, 0] - own
    assert other == pytest.approx(SZABO_OSTLUND_H2["attraction_11_other"], abs=2e-4)


def test_two_electron_anchors(szabo_integrals):
    eri = szabo_integrals.two_electron
    assert eri[0, 0, 0, 0] == pytest.approx(SZABO_OSTLUND_H2["eri_1111"], abs=2e-4)
    assert eri[1, 1, 0, 0] == pytest.approx(SZABO_OSTLUND_H2["eri_2211"], abs=2e-4)
    assert eri[1, 0, 1, 0] == pytest.approx(SZABO_OSTLUND_H2["eri_2121"], abs=2e-4)
    assert eri[1, 0, 0, 0] == pytest.approx(SZABO_OSTLUND_H2["eri_2111"], abs=2e-4)


def test_two_electron_8fold_symmetry(szabo_integrals):
    eri = szabo_integrals.two_electron
    np.testing.assert_allclose(eri, eri.transpose(1, 0, 2, 3), atol=1e-12)
    np.testing.assert_allclose(eri, eri.transpose(0, 1, 3, 2), atol=1e-12)
    np.testing.assert_allclose(eri, eri.transpose(2, 3, 0, 1), atol=1e-12)


def test_nuclear_repulsion(szabo_integrals):
    assert szabo_integrals.nuclear_repulsion == pytest.approx(1.0 / 1.4, abs=1e-12)


def test_non_hydrogen_rejected():
    with pytest.raises(UnsupportedElementError):
        chem.sto3g_integrals(chem.h2o_bend_molecule(104.5))


# ---------------------------------------------------------------------------
# SCF

def test_rhf_matches_literature(szabo_integrals):
    scf = chem.rhf(szabo_integrals, 2)
    electronic = scf.hf_energy - szabo_integrals.nuclear_repulsion
    assert electronic == pytest.approx(SZABO_OSTLUND_H2["electronic_energy"], abs=2e-4)
    assert scf.hf_energy == pytest.approx(SZABO_OSTLUND_H2["total_energy"], abs=2e-4)
    assert scf.orbital_energies[0] == pytest.approx(
        SZABO_OSTLUND_H2["orbital_energy_bonding"], abs=2e-4)
    assert scf.orbital_energies[1] == pytest.approx(
        SZABO_OSTLUND_H2["orbital_energy_antibonding"], abs=2e-4)


def test_rhf_orbitals_s_orthonormal(szabo_integrals):
    scf = chem.rhf(szabo_integrals, 2)
    gram = scf.orbital_coefficients.T @ szabo_integrals.overlap @ scf.orbital_coefficients
    np.testing.assert_allclose(gram, np.eye(2), atol=1e-8)


def test_rhf_validates_electron_count(szabo_integrals):
    with pytest.raises(ValidationError):
        chem.rhf(szabo_integrals, 3)
    with pytest.raises(ValidationError):
        chem.rhf(szabo_integrals, 0)
    with pytest.raises(ValidationError):
        chem.rhf(szabo_integrals, 6)


@pytest.mark.parametrize("r", [0.4, 0.9, 1.8, 2.5])
def test_rhf_variational_against_core_guess(r):
    ints = chem.sto3g_integrals(chem.h2_molecule(r))
    scf = chem.rhf(ints, 2)
    # HF energy sits above the exact (sector FCI) ground energy
    built = chem.build_molecular_hamiltonian(chem.builtin_family("h2"), r)
    fci, _ = oracle.ground_state(built.hamiltonian, oracle.SectorSpec(2))
    assert scf.hf_energy >= fci - 1e-9


# ---------------------------------------------------------------------------
# Jordan-Wigner against the dense fermionic oracle

def jw_reference_pairs(built: chem.BuiltHamiltonian) -> dict[str, float]:
    """Project the dense Fock-space Hamiltonian onto Pauli strings using
    only test-local machinery."""
    scf = built.scf
    mol_ints = chem.sto3g_integrals(
        chem.builtin_family(built.label).molecule_at(built.x_value))
    C = scf.orbital_coefficients
    h_mo = C.T @ mol_ints.core_hamiltonian @ C
    g_mo = np.einsum("pi,qj,pqrs,rk,sl->ijkl", C, C, mol_ints.two_electron,
                     C, C, optimize=True)
    h_so, g_so = spin_orbital_integrals(h_mo, g_mo)
    dense = dense_fermionic_hamiltonian(h_so, g_so, mol_ints.nuclear_repulsion)
    return pauli_coefficients(dense, 2 * h_mo.shape[0])


def test_jordan_wigner_matches_dense_oracle(h2_equilibrium):
    expected = jw_reference_pairs(h2_equilibrium)
    h = h2_equilibrium.hamiltonian
    got = dict(pauli.terms_as_pairs(h))
    got["I" * h.n_qubits] = h.identity_offset
    assert set(got) == set(expected)
    for string, coeff in expected.items():
        assert got[string] == pytest.approx(coeff, abs=1e-10), string


def test_h2_term_structure(h2_equilibrium):
    h = h2_equilibrium.hamiltonian
    assert h.n_qubits == 4
    assert len(h.diagonal_terms) == 10
    assert len(h.nondiagonal_terms) == 4
    for term in h.nondiagonal_terms:
        assert sorted(term.paulis) == ["X", "X", "Y", "Y"]
        assert abs(term.coefficient) == pytest.approx(0.0453222019, abs=1e-7)


def test_hf_state_index_interleaved(h2_equilibrium):
    assert h2_equilibrium.hf_state_index == 3  # qubits 0,1 = bonding a/b
    assert h2_equilibrium.n_electrons == 2


def test_hf_determinant_energy_matches_scf(h2_equilibrium, h3p_point):
    for built in (h2_equilibrium, h3p_point):
        det = oracle.hf_energy(built.hamiltonian, built.hf_state_index)
        assert det == pytest.approx(built.scf.hf_energy, abs=1e-8)


def test_correlation_energy_exists(h2_equilibrium):
    fci, _ = oracle.ground_state(h2_equilibrium.hamiltonian, oracle.SectorSpec(2))
    assert h2_equilibrium.scf.hf_energy - fci > 0.01


# ---------------------------------------------------------------------------
# families and geometry conventions

def test_family_geometries():
    h2 = chem.h2_molecule(0.9)
    assert h2.atoms[0][1] == (0.0, 0.0, 0.0)
    assert h2.atoms[1][1] == (0.9, 0.0, 0.0)
    h3 = chem.h3_linear_molecule(1.1)
    assert [a[1][0] for a in h3.atoms] == [-1.1, 0.0, 1.1]
    tri = chem.h3_triangle_plus_molecule(1.0)
    assert tri.charge == 1
    assert tri.atoms[2][1] == pytest.approx((0.5, math.sqrt(3) / 2, 0.0))
    water = chem.h2o_bend_molecule(90.0, r=1.0)
    assert water.atoms[2][1] == pytest.approx((0.0, 1.0, 0.0), abs=1e-12)


def test_unknown_family_rejected():
    with pytest.raises(ValidationError):
        chem.builtin_family("h4")


def test_n_electrons_accounts_for_charge():
    assert chem.h3_triangle_plus_molecule(1.0).n_electrons == 2
    assert chem.h3_linear_molecule(1.0).n_electrons == 3
    assert chem.h2o_bend_molecule(104.5).n_electrons == 10


def test_build_molecular_hamiltonian_metadata():
    built = chem.build_molecular_hamiltonian(chem.builtin_family("h2"), 0.9)
    assert built.label == "h2"
    assert built.x_value == 0.9
    assert built.x_units == "angstrom"
    assert built.reference_energies["hf"] == pytest.approx(built.scf.hf_energy)
    assert built.hamiltonian.n_qubits == 4
