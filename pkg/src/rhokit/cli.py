"""Command-line front-end.

Every command reads and writes the JSON documents defined in
``rhokit.documents``; ``-`` stands for stdin/stdout. Errors are reported as a
JSON object on stderr and mapped onto a fixed exit-code contract:

* 0 -- success (for ``verify``: the report is clean)
* 2 -- unreadable or malformed input document
* 3 -- violated precondition (including a dirty ``verify`` report)
* 4 -- numerical failure
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import documents
from .ensembles import validate_ensemble
from .errors import DocumentError, NumericalFailure, RhokitError
from .linalg import DEFAULT_RANK_TOL, DEFAULT_TOL, max_abs
from .purification import (
    apply_unitary_umap,
    check_umap,
    ensemble_containing,
    ensemble_from_basis,
    purify,
    umap_between,
)
from .steering import steer

EXIT_OK = 0
EXIT_DOCUMENT = 2
EXIT_PRECONDITION = 3
EXIT_NUMERICAL = 4


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)


def _load(path: str) -> dict:
    return documents.load_document(_read_text(path))


def _write_document(path: str, doc: dict) -> None:
    _write_text(path, documents.dump_document(doc))


def _add_tolerances(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tol", type=float, default=DEFAULT_TOL)
    parser.add_argument("--rank-tol", type=float, default=DEFAULT_RANK_TOL)


def _cmd_purify(args) -> int:
    ensemble = documents.to_ensemble(_load(args.ensemble))
    joint, ancilla = purify(ensemble, args.dim_m, args.tol, args.rank_tol)
    _write_document(args.out, documents.joint_document(joint))
    if args.ancilla_out is not None:
        _write_document(args.ancilla_out, documents.ancilla_basis_document(ancilla))
    return EXIT_OK


def _cmd_ensemble_from_basis(args) -> int:
    joint = documents.to_joint(_load(args.joint))
    basis = documents.to_basis(_load(args.basis))
    ensemble, _, _ = ensemble_from_basis(joint, basis, args.rank_tol, args.tol)
    _write_document(args.out, documents.ensemble_document(ensemble))
    return EXIT_OK


def _cmd_umap(args) -> int:
    from_e = documents.to_ensemble(_load(args.from_ensemble))
    to_e = documents.to_ensemble(_load(args.to_ensemble))
    u = umap_between(from_e, to_e, args.tol, args.rank_tol)
    _write_document(args.out, documents.umap_document(u))
    return EXIT_OK


def _cmd_apply_u(args) -> int:
    joint = documents.to_joint(_load(args.joint))
    basis = documents.to_basis(_load(args.basis))
    unitary = documents.to_matrix(_load(args.unitary))
    to_e, u = apply_unitary_umap(joint, basis, unitary, args.rank_tol, args.tol)
    _write_document(args.out, documents.ensemble_document(to_e))
    if args.umap_out is not None:
        _write_document(args.umap_out, documents.umap_document(u))
    return EXIT_OK


def _cmd_contains(args) -> int:
    joint = documents.to_joint(_load(args.joint))
    ket = documents.to_ket(_load(args.ket))
    ensemble, _ = ensemble_containing(joint, ket, args.rank_tol, args.tol)
    _write_document(args.out, documents.ensemble_document(ensemble))
    return EXIT_OK


def _cmd_steer(args) -> int:
    joint = documents.to_joint(_load(args.joint))
    basis = documents.to_basis(_load(args.basis))
    report = steer(joint, basis, args.shots, args.seed, args.rank_tol, args.tol)
    _write_document(args.out, documents.report_document(report))
    return EXIT_OK


def _cmd_verify(args) -> int:
    violations: list[str] = []
    if args.ensemble is not None:
        try:
            ensemble = documents.to_ensemble(_load(args.ensemble))
        except RhokitError as exc:
            if isinstance(exc, DocumentError):
                raise
            violations.append(str(exc))
            ensemble = None
        if ensemble is not None:
            violations.extend(validate_ensemble(ensemble, args.tol, args.rank_tol))
            if args.rho is not None:
                rho = documents.to_matrix(_load(args.rho))
                if rho.shape != (ensemble.dim, ensemble.dim):
                    violations.append(
                        f"density matrix has shape {rho.shape}, expected "
                        f"({ensemble.dim}, {ensemble.dim})"
                    )
                else:
                    summed = np.einsum(
                        "s,si,sj->ij",
                        ensemble.weights,
                        ensemble.kets,
                        np.conj(ensemble.kets),
                    )
                    deviation = max_abs(summed - rho)
                    if deviation > args.tol:
                        violations.append(
                            f"ensemble misses the given density matrix by {deviation:.3e}"
                        )
    elif args.umap is not None:
        try:
            umap = documents.to_umap(_load(args.umap))
        except RhokitError as exc:
            if isinstance(exc, DocumentError):
                raise
            violations.append(str(exc))
        else:
            violations.extend(check_umap(umap, args.tol))
    else:
        try:
            joint = documents.to_joint(_load(args.joint))
        except RhokitError as exc:
            if isinstance(exc, DocumentError):
                raise
            violations.append(str(exc))
        else:
            norm = float(np.linalg.norm(joint.vec))
            if abs(norm - 1.0) > args.tol:
                violations.append(f"joint ket has norm {norm!r}, expected 1")
    _write_text(
        "-",
        json.dumps({"clean": not violations, "violations": violations}, indent=2)
        + "\n",
    )
    return EXIT_OK if not violations else EXIT_PRECONDITION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rhokit",
        description=(
            "Purify weighted-ket ensembles, convert between decompositions of "
            "one density matrix, and simulate ancilla-measurement steering. "
            "All values travel as versioned JSON documents; '-' means "
            "stdin/stdout."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("purify", help="purify an ensemble against canonical ancilla kets")
    p.add_argument("ensemble", help="ensemble document")
    p.add_argument("--dim-m", type=int, required=True, help="ancilla dimension")
    p.add_argument("--out", default="-", help="joint document destination")
    p.add_argument("--ancilla-out", default=None, help="ancilla (basis document) destination")
    _add_tolerances(p)
    p.set_defaults(func=_cmd_purify)

    p = sub.add_parser(
        "ensemble-from-basis",
        help="decompose a joint state by conditioning on an ancilla basis",
    )
    p.add_argument("joint", help="joint document")
    p.add_argument("basis", help="basis document")
    p.add_argument("--out", default="-")
    _add_tolerances(p)
    p.set_defaults(func=_cmd_ensemble_from_basis)

    p = sub.add_parser("umap", help="coefficient map between two same-density ensembles")
    p.add_argument("from_ensemble", metavar="from-ensemble", help="source ensemble document")
    p.add_argument("to_ensemble", metavar="to-ensemble", help="target ensemble document")
    p.add_argument("--out", default="-")
    _add_tolerances(p)
    p.set_defaults(func=_cmd_umap)

    p = sub.add_parser(
        "apply-u",
        help="rotate an ancilla basis by a unitary and extract the induced map",
    )
    p.add_argument("joint", help="joint document")
    p.add_argument("basis", help="basis document")
    p.add_argument("unitary", help="matrix document")
    p.add_argument("--out", default="-", help="ensemble document destination")
    p.add_argument("--umap-out", default=None, help="umap document destination")
    _add_tolerances(p)
    p.set_defaults(func=_cmd_apply_u)

    p = sub.add_parser(
        "contains",
        help="decomposition whose first element is a chosen support vector",
    )
    p.add_argument("joint", help="joint document")
    p.add_argument("ket", help="ket document")
    p.add_argument("--out", default="-")
    _add_tolerances(p)
    p.set_defaults(func=_cmd_contains)

    p = sub.add_parser("steer", help="measure the ancilla and sample outcome counts")
    p.add_argument("joint", help="joint document")
    p.add_argument("basis", help="basis document")
    p.add_argument("--shots", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0, help="PCG64 stream seed")
    p.add_argument("--out", default="-")
    _add_tolerances(p)
    p.set_defaults(func=_cmd_steer)

    p = sub.add_parser("verify", help="validate a document; exit 0 iff clean")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--ensemble", help="ensemble document")
    group.add_argument("--umap", help="umap document")
    group.add_argument("--joint", help="joint document")
    p.add_argument("--rho", default=None, help="density matrix document to check against")
    _add_tolerances(p)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DocumentError as exc:
        _emit_error(exc)
        return EXIT_DOCUMENT
    except NumericalFailure as exc:
        _emit_error(exc)
        return EXIT_NUMERICAL
    except RhokitError as exc:
        _emit_error(exc)
        return EXIT_PRECONDITION


def _emit_error(exc: RhokitError) -> None:
    sys.stderr.write(
        json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n"
    )


if __name__ == "__main__":
    sys.exit(main())
