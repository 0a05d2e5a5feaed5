"""Generalized variational eigensolver: train a low-depth
Hamiltonian-alternating ansatz at a handful of Hamiltonian parameters,
interpolate the optimal circuit parameters with quadratic splines, and
predict near-exact ground-state energies anywhere in between.

The pipeline, module by module:

- ``chem``    molecular Hamiltonians for hydrogen systems (STO-3G, RHF,
              Jordan-Wigner) and ingestion of externally built ones
- ``pauli``   Pauli-string algebra and the diagonal/nondiagonal split
- ``sim``     statevector simulation and adjoint-mode analytic gradients
- ``ansatz``  Hamiltonian-alternating and hardware-efficient circuits
- ``opt``     multi-start BFGS with a step-capped Wolfe line search
- ``interp``  quadratic-spline parameter interpolation across x
- ``oracle``  sector-restricted exact diagonalization references
- ``formats`` deterministic JSON/CSV artifacts
- ``cli``     the ``gvqe`` command-line driver
"""

from .ansatz import (AnsatzCircuit, KIND_HAMILTONIAN_ALTERNATING,
                     KIND_HARDWARE_EFFICIENT, apply, build_ha, build_he)
from .chem import (BuiltHamiltonian, HamiltonianFamily, MoleculeSpec,
                   build_molecular_hamiltonian, builtin_family,
                   ingest_hamiltonian, rhf, sto3g_integrals)
from .errors import (ConvergenceError, ExtrapolationError, OptimizationFailure,
                     ParseError, ResourceLimitError, SectorViolationError,
                     UnsupportedElementError, ValidationError)
from .interp import (CurvePoint, QuadraticSpline, TrainedModel, evaluate_curve,
                     fit, predict_params, warm_start_refine)
from .opt import (OptimizerConfig, OptResult, bfgs, gradient_check,
                  minimize_simultaneous, minimize_single)
from .oracle import SectorSpec, ground_state, hf_energy, sector_indices
from .pauli import PauliTerm, QubitHamiltonian, expectation, split
from .sim import StateVector, adjoint_gradient, basis_state

__all__ = [
    "AnsatzCircuit", "BuiltHamiltonian", "ConvergenceError", "CurvePoint",
    "ExtrapolationError", "HamiltonianFamily", "KIND_HAMILTONIAN_ALTERNATING",
    "KIND_HARDWARE_EFFICIENT", "MoleculeSpec", "OptResult", "OptimizerConfig",
    "OptimizationFailure", "ParseError", "PauliTerm", "QuadraticSpline",
    "QubitHamiltonian", "ResourceLimitError", "SectorSpec",
    "SectorViolationError", "StateVector", "TrainedModel",
    "UnsupportedElementError", "ValidationError", "adjoint_gradient", "apply",
    "basis_state", "bfgs", "build_ha", "build_he",
    "build_molecular_hamiltonian", "builtin_family", "evaluate_curve",
    "expectation", "fit", "gradient_check", "ground_state", "hf_energy",
    "ingest_hamiltonian", "minimize_simultaneous", "minimize_single",
    "predict_params", "rhf", "sector_indices", "split", "sto3g_integrals",
    "warm_start_refine",
]
