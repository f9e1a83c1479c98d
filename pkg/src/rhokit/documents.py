"""Versioned JSON interchange documents for every value the CLI moves around.

Every document is an envelope ``{"kind": ..., "version": 1, "payload": ...}``.
Complex numbers serialize as two-element ``[re, im]`` arrays, kets as arrays
of those, matrices as arrays of row arrays. Dimensions are always explicit in
the payload and checked against the data on parse; they are never inferred.
Floats are emitted with Python's shortest round-trip representation, so
``parse(dump(x))`` reproduces ``x`` bit-for-bit and equal inputs produce
byte-identical documents.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .ensembles import RhoEnsemble
from .errors import DocumentError
from .purification import Ancilla, JointState, UMap
from .steering import SteeringReport

VERSION = 1
KINDS = ("ket", "matrix", "ensemble", "joint", "umap", "basis", "report")


# ---------------------------------------------------------------------------
# scalar / array payload pieces


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _unpair(value, where: str) -> complex:
    if (
        not isinstance(value, list)
        or len(value) != 2
        or not all(_is_number(x) for x in value)
    ):
        raise DocumentError(f"{where}: expected a [re, im] pair, got {value!r}")
    return complex(float(value[0]), float(value[1]))


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def _vector_payload(vec) -> list:
    return [_pair(complex(z)) for z in np.asarray(vec, dtype=complex)]


def _parse_vector(value, dim: int, where: str) -> np.ndarray:
    if not isinstance(value, list) or len(value) != dim:
        raise DocumentError(f"{where}: expected {dim} entries")
    return np.array([_unpair(z, where) for z in value], dtype=complex)


def _matrix_payload(m) -> dict:
    arr = np.asarray(m, dtype=complex)
    return {
        "rows": int(arr.shape[0]),
        "cols": int(arr.shape[1]),
        "entries": [[_pair(complex(z)) for z in row] for row in arr],
    }


def _parse_matrix(value, where: str) -> np.ndarray:
    if not isinstance(value, dict):
        raise DocumentError(f"{where}: expected a matrix object")
    rows = _parse_dim(value.get("rows"), f"{where}.rows")
    cols = _parse_dim(value.get("cols"), f"{where}.cols")
    entries = value.get("entries")
    if not isinstance(entries, list) or len(entries) != rows:
        raise DocumentError(f"{where}: expected {rows} rows")
    return np.array(
        [_parse_vector(row, cols, f"{where}.entries[{i}]") for i, row in enumerate(entries)],
        dtype=complex,
    ).reshape(rows, cols)


def _parse_dim(value, where: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise DocumentError(f"{where}: expected a positive integer, got {value!r}")
    return value


# ---------------------------------------------------------------------------
# envelope


def _envelope(kind: str, payload: dict) -> dict:
    return {"kind": kind, "version": VERSION, "payload": payload}


def dump_document(doc: dict) -> str:
    """Serialize an envelope deterministically (sorted keys, trailing newline)."""
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def load_document(text: str) -> dict:
    """Parse an envelope, checking kind and version; payload stays raw."""
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except ValueError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise DocumentError(f"unknown document kind {kind!r}")
    if doc.get("version") != VERSION:
        raise DocumentError(f"unsupported document version {doc.get('version')!r}")
    if not isinstance(doc.get("payload"), dict):
        raise DocumentError("document payload must be a JSON object")
    return doc


def _reject_constant(name: str):
    raise DocumentError(f"non-finite number {name!r} is not allowed")


def _payload(doc: dict, kind: str) -> dict:
    if doc.get("kind") != kind:
        raise DocumentError(f"expected a {kind!r} document, got {doc.get('kind')!r}")
    return doc["payload"]


# ---------------------------------------------------------------------------
# builders


def ket_document(vec) -> dict:
    arr = np.asarray(vec, dtype=complex)
    return _envelope("ket", {"dim": int(arr.shape[0]), "entries": _vector_payload(arr)})


def matrix_document(m) -> dict:
    return _envelope("matrix", _matrix_payload(m))


def ensemble_document(e: RhoEnsemble) -> dict:
    return _envelope(
        "ensemble",
        {
            "dim": e.dim,
            "elements": [
                {"weight": float(w), "ket": _vector_payload(k)}
                for k, w in e.elements()
            ],
        },
    )


def joint_document(state: JointState) -> dict:
    return _envelope(
        "joint",
        {
            "dim_s": state.dim_s,
            "dim_m": state.dim_m,
            "vec": _vector_payload(state.vec),
        },
    )


def basis_document(kets, dim: int | None = None) -> dict:
    arr = np.asarray(kets, dtype=complex)
    if dim is None:
        dim = int(arr.shape[1])
    return _envelope(
        "basis",
        {"dim": int(dim), "kets": [_vector_payload(k) for k in arr]},
    )


def umap_document(u: UMap) -> dict:
    payload = {
        "rows": u.rows,
        "cols": u.cols,
        "coeffs": _matrix_payload(u.coeffs),
        "generator": None if u.generator is None else _matrix_payload(u.generator),
        "basis": None if u.basis is None else [_vector_payload(k) for k in u.basis],
    }
    return _envelope("umap", payload)


def report_document(report: SteeringReport) -> dict:
    return _envelope(
        "report",
        {
            "shots": report.shots,
            "counts": [int(c) for c in report.counts],
            "expected_weights": [float(w) for w in report.expected_weights],
            "post_density": _matrix_payload(report.post_density),
        },
    )


# ---------------------------------------------------------------------------
# extractors


def to_ket(doc: dict) -> np.ndarray:
    payload = _payload(doc, "ket")
    dim = _parse_dim(payload.get("dim"), "ket.dim")
    return _parse_vector(payload.get("entries"), dim, "ket.entries")


def to_matrix(doc: dict) -> np.ndarray:
    return _parse_matrix(_payload(doc, "matrix"), "matrix")


def to_ensemble(doc: dict) -> RhoEnsemble:
    payload = _payload(doc, "ensemble")
    dim = _parse_dim(payload.get("dim"), "ensemble.dim")
    elements = payload.get("elements")
    if not isinstance(elements, list) or not elements:
        raise DocumentError("ensemble.elements: expected a non-empty array")
    kets = []
    weights = []
    for i, element in enumerate(elements):
        if not isinstance(element, dict):
            raise DocumentError(f"ensemble.elements[{i}]: expected an object")
        weight = element.get("weight")
        if not _is_number(weight):
            raise DocumentError(f"ensemble.elements[{i}].weight: expected a number")
        weights.append(float(weight))
        kets.append(
            _parse_vector(element.get("ket"), dim, f"ensemble.elements[{i}].ket")
        )
    return RhoEnsemble(kets=np.stack(kets), weights=np.array(weights))


def to_joint(doc: dict) -> JointState:
    payload = _payload(doc, "joint")
    dim_s = _parse_dim(payload.get("dim_s"), "joint.dim_s")
    dim_m = _parse_dim(payload.get("dim_m"), "joint.dim_m")
    vec = _parse_vector(payload.get("vec"), dim_s * dim_m, "joint.vec")
    return JointState(dim_s=dim_s, dim_m=dim_m, vec=vec)


def to_basis(doc: dict) -> np.ndarray:
    payload = _payload(doc, "basis")
    dim = _parse_dim(payload.get("dim"), "basis.dim")
    kets = payload.get("kets")
    if not isinstance(kets, list) or not kets:
        raise DocumentError("basis.kets: expected a non-empty array")
    return np.stack(
        [_parse_vector(k, dim, f"basis.kets[{i}]") for i, k in enumerate(kets)]
    )


def to_umap(doc: dict) -> UMap:
    payload = _payload(doc, "umap")
    rows = _parse_dim(payload.get("rows"), "umap.rows")
    cols = _parse_dim(payload.get("cols"), "umap.cols")
    coeffs = _parse_matrix(payload.get("coeffs"), "umap.coeffs")
    if coeffs.shape != (rows, cols):
        raise DocumentError(
            f"umap.coeffs has shape {coeffs.shape}, envelope says ({rows}, {cols})"
        )
    generator = payload.get("generator")
    if generator is not None:
        generator = _parse_matrix(generator, "umap.generator")
    basis = payload.get("basis")
    if basis is not None:
        if not isinstance(basis, list) or len(basis) != rows:
            raise DocumentError(f"umap.basis: expected {rows} kets")
        basis = np.stack(
            [_parse_vector(k, rows, f"umap.basis[{i}]") for i, k in enumerate(basis)]
        )
    return UMap(coeffs=coeffs, generator=generator, basis=basis)


def to_report(doc: dict) -> SteeringReport:
    payload = _payload(doc, "report")
    shots = _parse_dim(payload.get("shots"), "report.shots")
    counts = payload.get("counts")
    weights = payload.get("expected_weights")
    if not isinstance(counts, list) or not all(
        isinstance(c, int) and not isinstance(c, bool) and c >= 0 for c in counts
    ):
        raise DocumentError("report.counts: expected an array of non-negative integers")
    if (
        not isinstance(weights, list)
        or len(weights) != len(counts)
        or not all(_is_number(w) for w in weights)
    ):
        raise DocumentError("report.expected_weights: expected numbers matching counts")
    return SteeringReport(
        shots=shots,
        counts=[int(c) for c in counts],
        expected_weights=np.array([float(w) for w in weights]),
        post_density=_parse_matrix(payload.get("post_density"), "report.post_density"),
    )


def ancilla_basis_document(ancilla: Ancilla) -> dict:
    """Serialize ancilla kets as a basis document (possibly a partial set)."""
    return basis_document(ancilla.kets, dim=ancilla.dim_m)
