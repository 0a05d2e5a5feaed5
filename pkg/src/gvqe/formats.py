"""File formats: Hamiltonian interchange JSON, trained-model JSON, and
curve CSV, plus the config hashing that stamps every artifact.

Everything written here is deterministic text: JSON with sorted keys and
floats serialized by repr (shortest string that round-trips binary64
exactly), CSV with unit-tagged headers.  Rerunning with an identical
config reproduces every output byte for byte.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .errors import ParseError, ValidationError

FORMAT_VERSION = 1

_HAMILTONIAN_REQUIRED = ("format_version", "n_qubits", "n_electrons", "label",
                         "x_value", "x_units", "identity_offset", "terms")
_MODEL_REQUIRED = ("format_version", "family_label", "x_units", "depth",
                   "ansatz_kind", "training_xs", "optimal_params",
                   "training_energies")


def plain(obj):
    """Recursively convert numpy containers/scalars to JSON-ready types."""
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def canonical_json(obj) -> str:
    return json.dumps(plain(obj), indent=2, sort_keys=True) + "\n"


def config_sha256(config: dict) -> str:
    """Hash of the canonical JSON serialization of a config dict."""
    return hashlib.sha256(canonical_json(config).encode()).hexdigest()


def _write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def _stamp(record: dict, config_hash: str, seed: int) -> dict:
    record = dict(record)
    record["format_version"] = FORMAT_VERSION
    record["config_sha256"] = config_hash
    record["seed"] = int(seed)
    return record


# ---------------------------------------------------------------------------
# Hamiltonian interchange files

def hamiltonian_record(*, n_qubits: int, n_electrons: int, label: str,
                       x_value: float, x_units: str, identity_offset: float,
                       terms: list[tuple[str, float]],
                       reference_energies: dict | None = None,
                       provenance: str = "") -> dict:
    """Assemble the interchange record; terms are (pauli string, coeff)
    pairs excluding the identity (that lives in identity_offset)."""
    return {
        "n_qubits": int(n_qubits),
        "n_electrons": int(n_electrons),
        "label": str(label),
        "x_value": float(x_value),
        "x_units": str(x_units),
        "identity_offset": float(identity_offset),
        "terms": [{"pauli": p, "coeff": float(c)} for p, c in terms],
        "reference_energies": plain(reference_energies or {}),
        "provenance": str(provenance),
    }


def write_hamiltonian_file(path, record: dict, config_hash: str, seed: int) -> Path:
    return _write_text(path, canonical_json(_stamp(record, config_hash, seed)))


def read_hamiltonian_file(path) -> dict:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: cannot read Hamiltonian file: {exc}") from exc
    if not isinstance(raw, dict):
        raise ParseError(f"{path}: expected a JSON object at top level")
    for key in _HAMILTONIAN_REQUIRED:
        if key not in raw:
            raise ParseError(f"{path}: missing required field {key!r}")
    if raw["format_version"] != FORMAT_VERSION:
        raise ParseError(
            f"{path}: format_version {raw['format_version']!r} unsupported "
            f"(expected {FORMAT_VERSION})")
    n_qubits = raw["n_qubits"]
    if not isinstance(n_qubits, int) or n_qubits < 1:
        raise ParseError(f"{path}: n_qubits must be a positive integer")
    n_electrons = raw["n_electrons"]
    if not isinstance(n_electrons, int) or n_electrons < 0:
        raise ParseError(f"{path}: n_electrons must be a non-negative integer")
    if not isinstance(raw["terms"], list):
        raise ParseError(f"{path}: terms must be a list")
    for i, term in enumerate(raw["terms"]):
        if not isinstance(term, dict) or "pauli" not in term or "coeff" not in term:
            raise ParseError(f"{path}: terms[{i}] needs 'pauli' and 'coeff'")
        pauli_string = term["pauli"]
        if not isinstance(pauli_string, str) or len(pauli_string) != n_qubits:
            raise ParseError(
                f"{path}: terms[{i}].pauli must be a string of length {n_qubits}")
        if not set(pauli_string) <= set("IXYZ"):
            raise ParseError(
                f"{path}: terms[{i}].pauli contains letters outside IXYZ")
        if not isinstance(term["coeff"], (int, float)):
            raise ParseError(f"{path}: terms[{i}].coeff must be a number")
    for key, kind in (("x_value", (int, float)), ("identity_offset", (int, float)),
                      ("label", str), ("x_units", str)):
        if not isinstance(raw[key], kind):
            raise ParseError(f"{path}: field {key!r} has the wrong type")
    record = {key: raw[key] for key in _HAMILTONIAN_REQUIRED}
    record["x_value"] = float(raw["x_value"])
    record["identity_offset"] = float(raw["identity_offset"])
    record["reference_energies"] = raw.get("reference_energies") or {}
    record["provenance"] = raw.get("provenance") or ""
    return record


def hamiltonian_filename(label: str, x_value: float) -> str:
    return f"{label}_x{repr(float(x_value))}.json"


# ---------------------------------------------------------------------------
# trained-model files

def write_model_file(path, model, config_hash: str, seed: int) -> Path:
    """Persist a TrainedModel.  Spline coefficients are not stored: the fit
    is deterministic, so loading refits from the stored knots and optima."""
    record = {
        "family_label": model.family_label,
        "x_units": model.x_units,
        "depth": int(model.depth),
        "ansatz_kind": model.ansatz_kind,
        "training_xs": model.training_xs,
        "optimal_params": model.optimal_params,
        "training_energies": model.training_energies,
        "metadata": model.metadata,
    }
    return _write_text(path, canonical_json(_stamp(record, config_hash, seed)))


def read_model_file(path):
    from . import interp  # deferred: formats is imported by chem, chem by interp

    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: cannot read model file: {exc}") from exc
    for key in _MODEL_REQUIRED:
        if key not in raw:
            raise ParseError(f"{path}: missing required field {key!r}")
    if raw["format_version"] != FORMAT_VERSION:
        raise ParseError(
            f"{path}: format_version {raw['format_version']!r} unsupported "
            f"(expected {FORMAT_VERSION})")
    try:
        return interp.fit(
            np.asarray(raw["training_xs"], dtype=float),
            np.asarray(raw["optimal_params"], dtype=float),
            training_energies=np.asarray(raw["training_energies"], dtype=float),
            family_label=raw["family_label"],
            depth=int(raw["depth"]),
            ansatz_kind=raw["ansatz_kind"],
            x_units=raw["x_units"],
            metadata=raw.get("metadata") or {},
        )
    except ValidationError as exc:
        raise ParseError(f"{path}: stored model is inconsistent: {exc}") from exc


# ---------------------------------------------------------------------------
# curve CSV

def write_curve_file(path, points, x_units: str, config_hash: str, seed: int,
                     include_direct: bool = True) -> Path:
    """Curve rows ordered by x.  Columns: x, the interpolated-parameter
    energy, HF and sector-exact references, the directly-interpolated
    energy (for evaluate curves), then one column per circuit parameter."""
    points = sorted(points, key=lambda p: p.x)
    parameter_count = points[0].params.size if points else 0
    header = [f"x[{x_units}]", "E_interp[hartree]", "E_HF[hartree]",
              "E_FCI[hartree]"]
    if include_direct:
        header.append("E_direct_interp[hartree]")
    header += [f"param_{j}[rad]" for j in range(parameter_count)]
    lines = [
        f"# format_version: {FORMAT_VERSION}",
        f"# config_sha256: {config_hash}",
        f"# seed: {int(seed)}",
        ",".join(header),
    ]
    for p in points:
        row = [repr(float(p.x)), repr(float(p.energy_interp)),
               repr(float(p.energy_hf)), repr(float(p.energy_fci))]
        if include_direct:
            row.append(repr(float(p.energy_direct_interp)))
        row += [repr(float(v)) for v in p.params]
        lines.append(",".join(row))
    return _write_text(path, "\n".join(lines) + "\n")


def read_curve_file(path) -> dict:
    """Parse a curve CSV back into arrays, keyed by the untagged column
    names, plus the stamp fields."""
    path = Path(path)
    lines = path.read_text().splitlines()
    meta: dict = {}
    header: list[str] | None = None
    rows: list[list[float]] = []
    for line in lines:
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            meta[key.strip()] = value.strip()
            continue
        if header is None:
            header = [column.split("[")[0] for column in line.split(",")]
            continue
        if line.strip():
            rows.append([float(v) for v in line.split(",")])
    if header is None:
        raise ParseError(f"{path}: no header row found")
    if any(len(r) != len(header) for r in rows):
        raise ParseError(f"{path}: ragged rows")
    data = np.array(rows, dtype=float) if rows else np.zeros((0, len(header)))
    out = {name: data[:, j] for j, name in enumerate(header)}
    out["_meta"] = meta
    out["_columns"] = header
    return out


# ---------------------------------------------------------------------------
# optimizer-result records

def opt_result_record(x_value: float, result) -> dict:
    return {
        "x_value": float(x_value),
        "best_energy": float(result.best_energy),
        "best_params": result.best_params,
        "best_restart": int(result.best_restart),
        "all_restart_energies": result.all_restart_energies,
        "iterations_per_restart": result.iterations_per_restart,
        "converged_flags": result.converged_flags,
        "final_grad_norms": result.final_grad_norms,
    }


def write_records_file(path, records: list[dict], config_hash: str, seed: int) -> Path:
    return _write_text(path, canonical_json(
        _stamp({"records": records}, config_hash, seed)))


def write_json_file(path, record: dict, config_hash: str, seed: int) -> Path:
    """Write any stamped JSON artifact (refinement results and the like)."""
    return _write_text(path, canonical_json(_stamp(record, config_hash, seed)))
