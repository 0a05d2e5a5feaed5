"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: validation/parse -> 2,
convergence -> 3, resource caps -> 4.
"""


class ValidationError(ValueError):
    """Structurally invalid input: bad Pauli letters, length mismatches,
    inconsistent qubit counts, out-of-range indices, malformed configs."""


class ParseError(ValidationError):
    """A file could not be parsed; message carries line/field context."""


class ConvergenceError(RuntimeError):
    """An iterative solver (SCF, Lanczos, optimizer) failed to converge."""


class OptimizationFailure(ConvergenceError):
    """Every optimizer restart diverged or produced non-finite energies."""


class ResourceLimitError(RuntimeError):
    """A qubit-count or memory cap would be exceeded."""


class SectorViolationError(ValidationError):
    """A Hamiltonian claimed to conserve particle number has matrix
    elements that leave the requested number sector."""


class ExtrapolationError(ValidationError):
    """An interpolated model was evaluated outside its training range
    without the explicit override."""


class UnsupportedElementError(ValidationError):
    """Built-in integrals cover hydrogen only; other elements must come in
    through Hamiltonian-file ingestion."""
