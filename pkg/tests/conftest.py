"""Shared fixtures: expensive molecular builds are computed once per
session and reused across test modules."""

from __future__ import annotations

import pytest

from gvqe import chem


@pytest.fixture(scope="session")
def h2_equilibrium() -> chem.BuiltHamiltonian:
    return chem.build_molecular_hamiltonian(chem.builtin_family("h2"), 0.7414)


@pytest.fixture(scope="session")
def h2_stretched() -> chem.BuiltHamiltonian:
    return chem.build_molecular_hamiltonian(chem.builtin_family("h2"), 1.4)


@pytest.fixture(scope="session")
def h3p_point() -> chem.BuiltHamiltonian:
    return chem.build_molecular_hamiltonian(
        chem.builtin_family("h3_triangle_plus"), 1.0)
