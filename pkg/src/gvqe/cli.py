"""Command-line driver: build Hamiltonian files, train the interpolated-
parameter model, evaluate dissociation curves, refine, run the shared-
parameter (simultaneous) experiment, and expose the exact-reference and
gradient-check utilities.

The pipeline is file-based and deterministic: `build` writes one
Hamiltonian JSON per requested x into OUT/hamiltonians/, `train` consumes
those files and writes OUT/model.json (+ per-point optimizer records),
`evaluate` writes OUT/curve.csv.  Every artifact embeds the config hash
and seed; rerunning a stage with the same config reproduces its outputs
byte for byte.

Exit codes: 0 success, 2 validation/parse errors, 3 convergence failures,
4 resource caps.
"""

from __future__ import annotations

import argparse
import glob as globlib
import sys
from pathlib import Path

import numpy as np

from . import ansatz, chem, formats, interp, opt, oracle, pauli
from .errors import (ConvergenceError, ResourceLimitError, ValidationError)

_X_MATCH_TOLERANCE = 1e-9


# ---------------------------------------------------------------------------
# small parsers

def _parse_x_list(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ValidationError(f"cannot parse x list {text!r}: {exc}") from None
    if not values:
        raise ValidationError(f"empty x list {text!r}")
    return values


def _parse_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValidationError(
            f"grid must be min:max:count, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ValidationError(f"cannot parse grid {text!r}: {exc}") from None
    if count < 2:
        raise ValidationError("grid count must be at least 2")
    if not lo < hi:
        raise ValidationError("grid min must be below grid max")
    return np.linspace(lo, hi, count)


def _config_dict(args: argparse.Namespace) -> dict:
    config = {k: v for k, v in vars(args).items() if k != "func"}
    config["command"] = args.func.__name__.removeprefix("_cmd_")
    return formats.plain(config)


def _hamiltonian_dir(out: str) -> Path:
    return Path(out) / "hamiltonians"


def _load_built_hamiltonians(out: str) -> list[chem.BuiltHamiltonian]:
    directory = _hamiltonian_dir(out)
    files = sorted(directory.glob("*.json"))
    if not files:
        raise ValidationError(
            f"no Hamiltonian files in {directory}; run the build stage first")
    builts = [chem.ingest_hamiltonian(f) for f in files]
    builts.sort(key=lambda b: b.x_value)
    return builts


def _match_x(builts: list[chem.BuiltHamiltonian], x: float) -> chem.BuiltHamiltonian:
    for built in builts:
        if abs(built.x_value - x) <= _X_MATCH_TOLERANCE:
            return built
    available = ", ".join(repr(b.x_value) for b in builts)
    raise ValidationError(
        f"no Hamiltonian file for x={x!r}; available: {available}")


def _file_provider(builts: list[chem.BuiltHamiltonian]) -> interp.HamiltonianProvider:
    return lambda x: _match_x(builts, x)


def _provider_for_label(label: str, out: str) -> interp.HamiltonianProvider:
    """Builtin families rebuild Hamiltonians at any x; ingested families
    can only be evaluated where a file exists."""
    if label in chem.BUILTIN_FAMILIES:
        family = chem.builtin_family(label)
        return lambda x: chem.build_molecular_hamiltonian(family, x)
    return _file_provider(_load_built_hamiltonians(out))


def _circuit_for_kind(kind: str, built: chem.BuiltHamiltonian, depth: int) -> ansatz.AnsatzCircuit:
    if kind == ansatz.KIND_HAMILTONIAN_ALTERNATING:
        return ansatz.build_ha(built.hamiltonian, depth, built.hf_state_index)
    if kind == ansatz.KIND_HARDWARE_EFFICIENT:
        return ansatz.build_he(built.hamiltonian.n_qubits, depth)
    raise ValidationError(f"unknown ansatz kind {kind!r}")


def _optimizer_config(args: argparse.Namespace, **overrides) -> opt.OptimizerConfig:
    values = dict(
        restarts=args.restarts,
        grad_tolerance=args.grad_tolerance,
        max_iters=args.max_iters,
        seed=args.seed,
    )
    values.update(overrides)
    return opt.OptimizerConfig(**values)


# ---------------------------------------------------------------------------
# subcommands

def _cmd_build(args: argparse.Namespace) -> int:
    config_hash = formats.config_sha256(_config_dict(args))
    directory = _hamiltonian_dir(args.out)
    written: list[Path] = []
    if args.family.startswith("ingest:"):
        pattern = args.family.removeprefix("ingest:")
        matches = sorted(globlib.glob(pattern))
        if not matches:
            raise ValidationError(f"ingest pattern {pattern!r} matched no files")
        for match in matches:
            built = chem.ingest_hamiltonian(match)
            written.append(_write_built(directory, built, config_hash, args.seed))
    else:
        family = chem.builtin_family(args.family)
        xs = set(_parse_x_list(args.train_at) if args.train_at else [])
        if args.grid:
            xs.update(float(v) for v in _parse_grid(args.grid))
        if not xs:
            raise ValidationError(
                "nothing to build: give --train-at and/or --grid")
        for x in sorted(xs):
            built = chem.build_molecular_hamiltonian(family, x)
            written.append(_write_built(directory, built, config_hash, args.seed))
    print(f"wrote {len(written)} Hamiltonian file(s) to {directory}")
    return 0


def _write_built(directory: Path, built: chem.BuiltHamiltonian,
                 config_hash: str, seed: int) -> Path:
    nondiag = [(t.paulis, t.coefficient)
               for t in built.hamiltonian.nondiagonal_terms]
    diag = [(t.paulis, t.coefficient) for t in built.hamiltonian.diagonal_terms]
    record = formats.hamiltonian_record(
        n_qubits=built.hamiltonian.n_qubits,
        n_electrons=built.n_electrons,
        label=built.label,
        x_value=built.x_value,
        x_units=built.x_units,
        identity_offset=built.hamiltonian.identity_offset,
        terms=diag + nondiag,
        reference_energies=built.reference_energies,
        provenance=built.provenance,
    )
    name = formats.hamiltonian_filename(built.label, built.x_value)
    return formats.write_hamiltonian_file(directory / name, record,
                                          config_hash, seed)


def _cmd_train(args: argparse.Namespace) -> int:
    config = _config_dict(args)
    config_hash = formats.config_sha256(config)
    builts = _load_built_hamiltonians(args.out)
    labels = {b.label for b in builts}
    if len(labels) != 1:
        raise ValidationError(
            f"Hamiltonian directory mixes families: {sorted(labels)}")
    xs = sorted(_parse_x_list(args.train_at))
    selected = [_match_x(builts, x) for x in xs]
    cfg = _optimizer_config(args, warm_start=args.warm_start)

    results: list[opt.OptResult] = []
    previous_best: np.ndarray | None = None
    for built in selected:
        circuit = _circuit_for_kind(args.kind, built, args.depth)
        seed_params = previous_best if cfg.warm_start == "chain" else None
        result = opt.minimize_single(built.hamiltonian, circuit, cfg,
                                     seed_params=seed_params)
        results.append(result)
        previous_best = result.best_params
        print(f"x={built.x_value!r}: E={result.best_energy:.12f} hartree "
              f"(restart {result.best_restart}, "
              f"{int(result.iterations_per_restart.max())} iters max)")

    model = interp.fit(
        [b.x_value for b in selected],
        np.vstack([r.best_params for r in results]),
        training_energies=[r.best_energy for r in results],
        family_label=selected[0].label,
        depth=args.depth,
        ansatz_kind=args.kind,
        x_units=selected[0].x_units,
        metadata={"restarts": args.restarts, "seed": args.seed,
                  "grad_tolerance": args.grad_tolerance,
                  "warm_start": args.warm_start or ""},
    )
    model_path = Path(args.out) / "model.json"
    formats.write_model_file(model_path, model, config_hash, args.seed)
    records = [formats.opt_result_record(b.x_value, r)
               for b, r in zip(selected, results)]
    formats.write_records_file(Path(args.out) / "training_records.json",
                               records, config_hash, args.seed)
    print(f"wrote {model_path}")
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    config_hash = formats.config_sha256(_config_dict(args))
    model_path = Path(args.model) if args.model else Path(args.out) / "model.json"
    model = formats.read_model_file(model_path)
    grid = _parse_grid(args.grid)
    provider = _provider_for_label(model.family_label, args.out)
    points = interp.evaluate_curve(model, grid, provider,
                                   allow_extrapolate=args.allow_extrapolate)
    curve_path = Path(args.out) / "curve.csv"
    formats.write_curve_file(curve_path, points, model.x_units,
                             config_hash, args.seed)
    worst = max(p.energy_interp - p.energy_fci for p in points)
    print(f"wrote {curve_path} ({len(points)} points, "
          f"max E_interp-E_FCI = {worst:.3e} hartree)")
    return 0


def _cmd_refine(args: argparse.Namespace) -> int:
    config_hash = formats.config_sha256(_config_dict(args))
    model_path = Path(args.model) if args.model else Path(args.out) / "model.json"
    model = formats.read_model_file(model_path)
    provider = _provider_for_label(model.family_label, args.out)
    cfg = _optimizer_config(args)
    result = interp.warm_start_refine(model, args.x, cfg, provider)

    built = provider(args.x)
    circuit = interp.circuit_for(model, built)
    interp_energy = pauli.expectation(
        built.hamiltonian,
        ansatz.apply(circuit, interp.predict_params(model, args.x)))
    record = formats.opt_result_record(args.x, result)
    record["interpolated_energy"] = interp_energy
    out_path = Path(args.out) / f"refine_x{repr(float(args.x))}.json"
    formats.write_json_file(out_path, {"record": record}, config_hash, args.seed)
    print(f"x={args.x!r}: interpolated {interp_energy:.12f} -> "
          f"refined {result.best_energy:.12f} hartree; wrote {out_path}")
    return 0


def _cmd_simultaneous(args: argparse.Namespace) -> int:
    config_hash = formats.config_sha256(_config_dict(args))
    builts = _load_built_hamiltonians(args.out)
    xs = sorted(_parse_x_list(args.train_at))
    selected = [_match_x(builts, x) for x in xs]
    cfg = _optimizer_config(args, grad_threshold_early_stop=args.grad_threshold)

    def builder(x: float, h: pauli.QubitHamiltonian) -> ansatz.AnsatzCircuit:
        return _circuit_for_kind(args.kind, _match_x(selected, x), args.depth)

    result = opt.minimize_simultaneous(
        [(b.x_value, b.hamiltonian) for b in selected], builder, cfg)
    record = formats.opt_result_record(float(xs[0]), result)
    record["training_xs"] = xs
    record["kind"] = args.kind
    record["depth"] = args.depth
    records_path = Path(args.out) / f"simultaneous_records_{args.kind}_d{args.depth}.json"
    formats.write_records_file(records_path, [record], config_hash, args.seed)
    print(f"simultaneous cost {result.best_energy:.12f} hartree over "
          f"{len(selected)} point(s); final |grad| "
          f"{float(result.final_grad_norms[result.best_restart]):.3e}")

    if args.grid:
        grid = _parse_grid(args.grid)
        provider = _provider_for_label(selected[0].label, args.out)
        points = []
        for x in grid:
            built = provider(float(x))
            circuit = _circuit_for_kind(args.kind, built, args.depth)
            energy = pauli.expectation(
                built.hamiltonian, ansatz.apply(circuit, result.best_params))
            fci, _ = oracle.ground_state(
                built.hamiltonian, oracle.SectorSpec(built.n_electrons))
            points.append(interp.CurvePoint(
                x=float(x), energy_interp=energy,
                energy_hf=oracle.hf_energy(built.hamiltonian, built.hf_state_index),
                energy_fci=fci, energy_direct_interp=float("nan"),
                params=result.best_params))
        curve_path = Path(args.out) / f"simultaneous_curve_{args.kind}_d{args.depth}.csv"
        formats.write_curve_file(curve_path, points, selected[0].x_units,
                                 config_hash, args.seed, include_direct=False)
        print(f"wrote {curve_path}")
    print(f"wrote {records_path}")
    return 0


def _resolve_single_hamiltonian(args: argparse.Namespace) -> chem.BuiltHamiltonian:
    if args.file:
        return chem.ingest_hamiltonian(args.file)
    if not args.family:
        raise ValidationError("give either --family with --x, or --file")
    if args.x is None:
        raise ValidationError("--family needs --x")
    return chem.build_molecular_hamiltonian(chem.builtin_family(args.family), args.x)


def _cmd_fci(args: argparse.Namespace) -> int:
    built = _resolve_single_hamiltonian(args)
    energy, _ = oracle.ground_state(built.hamiltonian,
                                    oracle.SectorSpec(built.n_electrons))
    record = {
        "label": built.label,
        "x_value": built.x_value,
        "x_units": built.x_units,
        "n_qubits": built.hamiltonian.n_qubits,
        "n_electrons": built.n_electrons,
        "sector_dimension": int(oracle.sector_indices(
            built.hamiltonian.n_qubits, built.n_electrons).size),
        "fci_energy": energy,
        "hf_energy": oracle.hf_energy(built.hamiltonian, built.hf_state_index),
    }
    print(formats.canonical_json(record), end="")
    return 0


def _cmd_gradcheck(args: argparse.Namespace) -> int:
    built = _resolve_single_hamiltonian(args)
    circuit = _circuit_for_kind(args.kind, built, args.depth)
    rng = np.random.default_rng(args.seed)
    params = rng.uniform(0.0, 2.0 * np.pi, size=circuit.parameter_count)
    worst = opt.gradient_check(opt.energy_cost(built.hamiltonian, circuit), params)
    print(f"max relative gradient error: {worst:.3e} "
          f"({circuit.parameter_count} parameters)")
    if worst >= 1e-6:
        raise ConvergenceError(
            f"analytic gradient disagrees with finite differences: {worst:.3e}")
    return 0


# ---------------------------------------------------------------------------
# argument wiring

def _add_opt_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--restarts", type=int, default=10,
                        help="independent optimizer restarts (default 10)")
    parser.add_argument("--seed", type=int, default=0,
                        help="base RNG seed (default 0)")
    parser.add_argument("--grad-tolerance", type=float, default=1e-8,
                        help="infinity-norm gradient stop (default 1e-8)")
    parser.add_argument("--max-iters", type=int, default=1000,
                        help="iteration cap per restart (default 1000)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gvqe",
        description="Train a low-depth variational ansatz at a few Hamiltonian "
                    "parameters and interpolate the optimal circuit parameters "
                    "across the whole parameter range.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="write Hamiltonian files for a family")
    p.add_argument("--family", required=True,
                   help="h2 | h3_linear | h3_triangle_plus | ingest:GLOB")
    p.add_argument("--train-at", default="", help="comma-separated x values")
    p.add_argument("--grid", default="", help="min:max:count evaluation grid")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("train", help="optimize at training points and fit the model")
    p.add_argument("--train-at", required=True, help="comma-separated x values")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--kind", default=ansatz.KIND_HAMILTONIAN_ALTERNATING,
                   choices=[ansatz.KIND_HAMILTONIAN_ALTERNATING,
                            ansatz.KIND_HARDWARE_EFFICIENT])
    p.add_argument("--warm-start", default=None, choices=["chain"],
                   help="seed each point's restart 0 from the previous optimum")
    _add_opt_flags(p)
    p.add_argument("--out", required=True, help="directory with hamiltonians/")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("evaluate", help="evaluate the interpolated curve on a grid")
    p.add_argument("--grid", required=True, help="min:max:count")
    p.add_argument("--model", default="", help="model file (default OUT/model.json)")
    p.add_argument("--allow-extrapolate", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("refine", help="re-optimize from the interpolated start")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--model", default="")
    _add_opt_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_refine)

    p = sub.add_parser("simultaneous",
                       help="optimize one shared parameter vector on all points")
    p.add_argument("--train-at", required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--kind", default=ansatz.KIND_HAMILTONIAN_ALTERNATING,
                   choices=[ansatz.KIND_HAMILTONIAN_ALTERNATING,
                            ansatz.KIND_HARDWARE_EFFICIENT])
    p.add_argument("--grid", default="", help="optional min:max:count curve grid")
    p.add_argument("--grad-threshold", type=float, default=None,
                   help="stop when the gradient 2-norm drops below this")
    _add_opt_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_simultaneous)

    p = sub.add_parser("fci", help="print exact and mean-field reference energies")
    p.add_argument("--family", default="")
    p.add_argument("--x", type=float, default=None)
    p.add_argument("--file", default="", help="Hamiltonian file instead of --family")
    p.set_defaults(func=_cmd_fci)

    p = sub.add_parser("gradcheck",
                       help="verify analytic gradients against finite differences")
    p.add_argument("--family", default="")
    p.add_argument("--x", type=float, default=None)
    p.add_argument("--file", default="")
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--kind", default=ansatz.KIND_HAMILTONIAN_ALTERNATING,
                   choices=[ansatz.KIND_HAMILTONIAN_ALTERNATING,
                            ansatz.KIND_HARDWARE_EFFICIENT])
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_gradcheck)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:  # includes parse/extrapolation/sector errors
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
