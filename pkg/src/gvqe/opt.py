"""BFGS energy minimization: cost functions with analytic gradients,
multi-start protocol, simultaneous (shared-parameter) optimization, and
gradient-threshold early stopping.

The minimizer is self-contained on purpose: quasi-Newton with a strong-Wolfe
line search (c1 = 1e-4, c2 = 0.9) whose per-iteration step length is capped.
The cap matters for these landscapes: the alternating-ansatz energy is
periodic with many exactly degenerate optima, and an unbounded line search
happily jumps dozens of periods on the first iteration.  Each restart then
lands on an arbitrary degenerate branch and the per-training-point optima
stop being a smooth function of the Hamiltonian parameter — which is fatal
for interpolation even though every single energy is fine.  Capping the step
keeps every restart in the basin nearest its initialization.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import ansatz, pauli, sim
from .errors import OptimizationFailure, ValidationError

_WOLFE_C1 = 1e-4
_WOLFE_C2 = 0.9
_LINE_SEARCH_TRIALS = 50
_CURVATURE_SKIP = 1e-12


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 10
    init_low: float = 0.0
    init_high: float = 1e-2
    grad_tolerance: float = 1e-8
    grad_threshold_early_stop: float | None = None
    max_iters: int = 1000
    seed: int = 0
    max_step: float = 1.0
    warm_start: str | None = None  # None or "chain"

    def __post_init__(self):
        if self.init_low > self.init_high:
            raise ValidationError(
                f"init_low {self.init_low} exceeds init_high {self.init_high}")
        if self.grad_tolerance <= 0:
            raise ValidationError("grad_tolerance must be positive")
        if self.grad_threshold_early_stop is not None and self.grad_threshold_early_stop <= 0:
            raise ValidationError("grad_threshold_early_stop must be positive")
        if self.restarts < 1:
            raise ValidationError("restarts must be at least 1")
        if self.max_iters < 1:
            raise ValidationError("max_iters must be at least 1")
        if self.max_step <= 0:
            raise ValidationError("max_step must be positive")
        if self.warm_start not in (None, "chain"):
            raise ValidationError(
                f"warm_start must be None or 'chain', got {self.warm_start!r}")


@dataclass(frozen=True)
class TracePoint:
    iteration: int
    cost: float
    grad_norm: float  # infinity norm of the gradient


@dataclass(frozen=True)
class OptResult:
    best_params: np.ndarray
    best_energy: float
    all_restart_energies: np.ndarray
    iterations_per_restart: np.ndarray
    converged_flags: np.ndarray
    best_restart: int
    final_grad_norms: np.ndarray  # 2-norm at termination, per restart

    def __post_init__(self):
        if self.all_restart_energies.size and not np.isclose(
                self.best_energy, self.all_restart_energies.min(),
                rtol=0.0, atol=0.0):
            raise ValidationError(
                "best_energy must equal the minimum restart energy")


def bfgs(f_and_grad: Callable[[np.ndarray], tuple[float, np.ndarray]],
         x0: np.ndarray, cfg: OptimizerConfig,
         ) -> tuple[np.ndarray, float, list[TracePoint], bool, float]:
    """Minimize f from x0.  Returns (x*, f*, trace, converged, final ||g||_2).

    Strong-Wolfe line search with the expansion phase capped at
    cfg.max_step; inverse Hessian starts at identity and resets there if a
    non-descent direction ever appears; the curvature update is skipped when
    s . y <= 1e-12 ||s|| ||y||.  Termination: ||g||_inf < grad_tolerance, or
    ||g||_2 < grad_threshold_early_stop when that is set, or max_iters.
    """
    x = np.array(x0, dtype=float)
    n = x.size
    f, g = f_and_grad(x)
    if not np.isfinite(f) or not np.all(np.isfinite(g)):
        raise OptimizationFailure(f"non-finite cost at the starting point: f={f}")
    h_inv = np.eye(n)
    trace = [TracePoint(0, f, float(np.abs(g).max()))]
    converged = False
    for iteration in range(1, cfg.max_iters + 1):
        if float(np.abs(g).max()) < cfg.grad_tolerance:
            converged = True
            break
        if (cfg.grad_threshold_early_stop is not None
                and float(np.linalg.norm(g)) < cfg.grad_threshold_early_stop):
            converged = True
            break
        direction = -h_inv @ g
        if np.dot(direction, g) >= 0.0:
            h_inv = np.eye(n)
            direction = -g
        step = _wolfe_line_search(f_and_grad, x, f, g, direction, cfg.max_step)
        if step is None:
            break  # line search exhausted; return best-so-far, not converged
        alpha, f_new, g_new = step
        s = alpha * direction
        y = g_new - g
        x = x + s
        f, g = f_new, g_new
        trace.append(TracePoint(iteration, f, float(np.abs(g).max())))
        sy = float(np.dot(s, y))
        if sy > _CURVATURE_SKIP * float(np.linalg.norm(s) * np.linalg.norm(y)):
            rho = 1.0 / sy
            sy_outer = np.outer(s, y)
            h_inv = (h_inv - rho * (sy_outer @ h_inv + h_inv @ sy_outer.T)
                     + rho * rho * float(y @ h_inv @ y) * np.outer(s, s)
                     + rho * np.outer(s, s))
    else:
        iteration = cfg.max_iters
    if not converged:
        grad_inf = float(np.abs(g).max())
        converged = grad_inf < cfg.grad_tolerance or (
            cfg.grad_threshold_early_stop is not None
            and float(np.linalg.norm(g)) < cfg.grad_threshold_early_stop)
    return x, f, trace, converged, float(np.linalg.norm(g))


def _wolfe_line_search(f_and_grad, x, f0, g0, direction, max_step):
    """Strong Wolfe conditions along x + a*direction, with the displacement
    ||a*direction|| capped at max_step.

    Returns (alpha, f(x+a d), grad(x+a d)) or None after 50 trials.  If the
    cap is hit while still descending, the capped point is accepted on
    sufficient decrease alone — a deliberately short step is safe for BFGS
    (the curvature-skip guard handles the update) and keeps iterates local.
    """
    d_norm = float(np.linalg.norm(direction))
    if d_norm == 0.0:
        return None
    slope0 = float(np.dot(g0, direction))
    if slope0 >= 0.0:
        return None
    a_cap = max_step / d_norm
    a_prev, f_prev = 0.0, f0
    alpha = min(1.0, a_cap)
    best = None  # lowest finite point seen, as a fallback
    for trial in range(_LINE_SEARCH_TRIALS):
        f_a, g_a = f_and_grad(x + alpha * direction)
        if not np.isfinite(f_a) or not np.all(np.isfinite(g_a)):
            alpha = 0.5 * (a_prev + alpha)  # shrink back toward known-good
            continue
        if best is None or f_a < best[1]:
            best = (alpha, f_a, g_a)
        armijo = f_a <= f0 + _WOLFE_C1 * alpha * slope0
        if not armijo or (trial > 0 and f_a >= f_prev):
            return _zoom(f_and_grad, x, f0, slope0, direction,
                         a_prev, f_prev, alpha, f_a, best)
        slope_a = float(np.dot(g_a, direction))
        if abs(slope_a) <= -_WOLFE_C2 * slope0:
            return alpha, f_a, g_a
        if slope_a >= 0.0:
            return _zoom(f_and_grad, x, f0, slope0, direction,
                         alpha, f_a, a_prev, f_prev, best)
        if alpha >= a_cap - 1e-15:
            return alpha, f_a, g_a  # capped but descending: accept on Armijo
        a_prev, f_prev = alpha, f_a
        alpha = min(2.0 * alpha, a_cap)
    return best


def _zoom(f_and_grad, x, f0, slope0, direction, a_lo, f_lo, a_hi, f_hi, best):
    """Bisection zoom between a bracketing pair (lo keeps the lower f)."""
    g_lo = None
    for _ in range(_LINE_SEARCH_TRIALS):
        alpha = 0.5 * (a_lo + a_hi)
        if abs(a_hi - a_lo) < 1e-16:
            break
        f_a, g_a = f_and_grad(x + alpha * direction)
        if not np.isfinite(f_a) or not np.all(np.isfinite(g_a)):
            a_hi = alpha
            continue
        if best is None or f_a < best[1]:
            best = (alpha, f_a, g_a)
        if f_a > f0 + _WOLFE_C1 * alpha * slope0 or f_a >= f_lo:
            a_hi, f_hi = alpha, f_a
        else:
            slope_a = float(np.dot(g_a, direction))
            if abs(slope_a) <= -_WOLFE_C2 * slope0:
                return alpha, f_a, g_a
            if slope_a * (a_hi - a_lo) >= 0.0:
                a_hi, f_hi = a_lo, f_lo
            a_lo, f_lo, g_lo = alpha, f_a, g_a
    if g_lo is not None:
        return a_lo, f_lo, g_lo
    return best


def energy_cost(h: pauli.QubitHamiltonian, circuit: ansatz.AnsatzCircuit,
                ) -> Callable[[np.ndarray], tuple[float, np.ndarray]]:
    """E(params) and its analytic gradient for one Hamiltonian/circuit."""
    applier = sim.HamiltonianApplier(h)
    input_state = circuit.input_state()

    def f_and_grad(params: np.ndarray) -> tuple[float, np.ndarray]:
        return sim.energy_and_gradient(circuit, applier, params, input_state)

    return f_and_grad


def summed_cost(costs: Sequence[Callable[[np.ndarray], tuple[float, np.ndarray]]],
                ) -> Callable[[np.ndarray], tuple[float, np.ndarray]]:
    def f_and_grad(params: np.ndarray) -> tuple[float, np.ndarray]:
        total = 0.0
        grad = np.zeros_like(params, dtype=float)
        for cost in costs:
            value, g = cost(params)
            total += value
            grad += g
        return total, grad

    return f_and_grad


def _multi_start(f_and_grad, parameter_count: int, cfg: OptimizerConfig,
                 seed_params: np.ndarray | None = None) -> OptResult:
    """Run cfg.restarts independent BFGS minimizations and keep the exact
    argmin (ties to the lower restart index).  Restart r draws its start
    from default_rng([seed, r]); when seed_params is given it replaces the
    random start of restart 0 (warm starting)."""
    params_per_restart: list[np.ndarray] = []
    energies = np.full(cfg.restarts, np.nan)
    iterations = np.zeros(cfg.restarts, dtype=int)
    flags = np.zeros(cfg.restarts, dtype=bool)
    grad_norms = np.full(cfg.restarts, np.nan)
    failures: list[str] = []
    for restart in range(cfg.restarts):
        rng = np.random.default_rng([cfg.seed, restart])
        x0 = rng.uniform(cfg.init_low, cfg.init_high, size=parameter_count)
        if restart == 0 and seed_params is not None:
            if seed_params.shape != (parameter_count,):
                raise ValidationError(
                    f"seed_params has shape {seed_params.shape}, "
                    f"expected ({parameter_count},)")
            x0 = np.array(seed_params, dtype=float)
        try:
            x, f, trace, converged, grad_norm = bfgs(f_and_grad, x0, cfg)
        except OptimizationFailure as exc:
            failures.append(f"restart {restart}: {exc}")
            continue
        params_per_restart.append(x)
        energies[restart] = f
        iterations[restart] = trace[-1].iteration
        flags[restart] = converged
        grad_norms[restart] = grad_norm
    finite = np.isfinite(energies)
    if not finite.any():
        raise OptimizationFailure(
            "every restart failed:\n" + "\n".join(failures))
    best = int(np.nanargmin(energies))
    alive = [i for i in range(cfg.restarts) if finite[i]]
    return OptResult(
        best_params=params_per_restart[alive.index(best)],
        best_energy=float(energies[best]),
        all_restart_energies=energies[finite],
        iterations_per_restart=iterations[finite],
        converged_flags=flags[finite],
        best_restart=best,
        final_grad_norms=grad_norms[finite],
    )


def minimize_single(h: pauli.QubitHamiltonian, circuit: ansatz.AnsatzCircuit,
                    cfg: OptimizerConfig,
                    seed_params: np.ndarray | None = None) -> OptResult:
    """Multi-start BFGS minimization of the circuit energy on one
    Hamiltonian.  seed_params, when given, warm-starts restart 0."""
    if circuit.n_qubits != h.n_qubits:
        raise ValidationError(
            f"circuit acts on {circuit.n_qubits} qubits, "
            f"Hamiltonian on {h.n_qubits}")
    return _multi_start(energy_cost(h, circuit), circuit.parameter_count,
                        cfg, seed_params)


def minimize_simultaneous(hams: Sequence[tuple[float, pauli.QubitHamiltonian]],
                          circuit_builder: Callable[[float, pauli.QubitHamiltonian],
                                                    ansatz.AnsatzCircuit],
                          cfg: OptimizerConfig,
                          seed_params: np.ndarray | None = None) -> OptResult:
    """Minimize the summed energy sum_a E(x_a, params) with one shared
    parameter vector.  circuit_builder(x, h) supplies the circuit for each
    point: alternating-ansatz circuits differ per Hamiltonian, a hardware-
    efficient circuit can simply be returned unchanged."""
    if not hams:
        raise ValidationError("need at least one (x, Hamiltonian) pair")
    circuits = [circuit_builder(x, h) for x, h in hams]
    counts = {c.parameter_count for c in circuits}
    if len(counts) != 1:
        raise ValidationError(
            f"circuits disagree on parameter count: {sorted(counts)}")
    costs = [energy_cost(h, c) for (_, h), c in zip(hams, circuits)]
    return _multi_start(summed_cost(costs), counts.pop(), cfg, seed_params)


def gradient_check(f_and_grad, params: np.ndarray, epsilon: float = 1e-6) -> float:
    """Max relative error of the analytic gradient against central finite
    differences — the correctness gate run before acceptance experiments."""
    params = np.asarray(params, dtype=float)
    _, grad = f_and_grad(params)
    worst = 0.0
    for j in range(params.size):
        shift = np.zeros_like(params)
        shift[j] = epsilon
        f_plus, _ = f_and_grad(params + shift)
        f_minus, _ = f_and_grad(params - shift)
        numeric = (f_plus - f_minus) / (2.0 * epsilon)
        scale = max(abs(numeric), abs(grad[j]), 1e-12)
        worst = max(worst, abs(grad[j] - numeric) / scale)
    return worst
