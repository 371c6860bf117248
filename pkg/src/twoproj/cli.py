"""Command-line frontend.

Matrices travel as UTF-8 JSON files ``{"rows": r, "cols": c, "data": [[re,
im], ...]}`` with the entries row-major and every number an IEEE-754 double
in shortest round-trip decimal form.  Each command reads its inputs, calls
the library, and prints a single JSON report on standard output: command
name, sha256 digests of the input files, the effective tolerance, and a
per-command results object.  Floating-point fields in reports carry 17
significant digits so reruns are byte-identical.  Diagnostics go to
standard error.

Exit codes: 0 success with a true verdict, 1 negative verdict (invalid
pair, failed verification, non-existence), 2 input or validation error,
64 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from .algebras import (
    UnimodularParams,
    default_unimodular_params,
    exists_unitary_in_cstar,
    exists_unitary_in_wstar,
    random_unimodular_params,
    simple_spectrum_all_in,
    wstar_unitary,
)
from .errors import (
    DimensionError,
    DimMismatchError,
    InternalError,
    InvalidMatrixError,
    NormTooLargeError,
    NotHermitianError,
    NotInjectiveError,
    NotProjectionError,
    ParseError,
    TwoProjError,
)
from .halmos import exists_symmetric_unitary, halmos_decompose
from .intertwine import (
    IntertwinerParams,
    general_unitary_halmos,
    identity_params,
    oracle_intertwiner_space,
    random_params,
    sgn_b,
    verify_symmetric_intertwiner,
    wdd_unitary,
)
from .matcore import Array, Tolerance, random_instance
from .projpair import kato_unitary, make_orth_pair, verify_supersymmetry
from .skew import make_idempotent_pair, prop2_conditions

__all__ = [
    "main",
    "build_parser",
    "parse_matrix_file",
    "parse_matrix_document",
    "matrix_to_document",
    "write_matrix_file",
]

_MATRIX_KEYS = frozenset({"rows", "cols", "data"})


def _as_finite_float(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{where}: expected a number, got {value!r}")
    out = float(value)
    if not math.isfinite(out):
        raise ParseError(f"{where}: number must be finite, got {value!r}")
    return out


def parse_matrix_document(obj, name: str = "matrix") -> Array:
    """Turn a decoded MatrixDocument into a complex matrix, strictly."""
    if not isinstance(obj, dict):
        raise ParseError(f"{name}: expected a JSON object")
    missing = _MATRIX_KEYS - obj.keys()
    if missing:
        raise ParseError(f"{name}: missing keys {sorted(missing)}")
    extra = obj.keys() - _MATRIX_KEYS
    if extra:
        raise ParseError(f"{name}: unexpected keys {sorted(extra)}")
    rows, cols = obj["rows"], obj["cols"]
    for label, value in (("rows", rows), ("cols", cols)):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ParseError(f"{name}: {label} must be an integer")
    if rows < 1 or cols < 1:
        raise DimensionError(f"{name}: rows and cols must be positive, got {rows}x{cols}")
    data = obj["data"]
    if not isinstance(data, list):
        raise ParseError(f"{name}: data must be an array")
    if len(data) != rows * cols:
        raise DimensionError(
            f"{name}: data has {len(data)} entries, expected rows*cols = {rows * cols}"
        )
    values = np.empty(rows * cols, dtype=np.complex128)
    for i, entry in enumerate(data):
        if not isinstance(entry, list) or len(entry) != 2:
            raise ParseError(f"{name}: data[{i}] must be a [re, im] pair")
        values[i] = complex(
            _as_finite_float(entry[0], f"{name}: data[{i}][0]"),
            _as_finite_float(entry[1], f"{name}: data[{i}][1]"),
        )
    return values.reshape(rows, cols)


def _read_json(path) -> tuple[object, str]:
    raw = Path(path).read_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not valid UTF-8 ({exc})") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return obj, digest


def parse_matrix_file(path) -> Array:
    """Read one MatrixDocument file."""
    obj, _ = _read_json(path)
    return parse_matrix_document(obj, name=str(path))


def matrix_to_document(m) -> dict:
    """Serialize a matrix as a MatrixDocument dictionary."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2:
        raise InvalidMatrixError(f"expected a 2-d array, got shape {m.shape}")
    data = [[float(z.real), float(z.imag)] for z in m.ravel(order="C")]
    return {"rows": int(m.shape[0]), "cols": int(m.shape[1]), "data": data}


def write_matrix_file(path, m) -> None:
    """Write a matrix in the canonical MatrixDocument format."""
    text = json.dumps(matrix_to_document(m)) + "\n"
    Path(path).write_bytes(text.encode("utf-8"))


def _render(value) -> str:
    """JSON with floats at 17 significant digits and stable key order."""
    if isinstance(value, dict):
        items = ", ".join(f"{json.dumps(str(k))}: {_render(v)}" for k, v in value.items())
        return "{" + items + "}"
    if isinstance(value, np.ndarray):
        if value.ndim == 2:
            return _render(matrix_to_document(value))
        return _render(list(value))
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_render(v) for v in value) + "]"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        out = float(value)
        if not math.isfinite(out):
            raise InternalError("non-finite number in report")
        return format(out, ".17g")
    if isinstance(value, (complex, np.complexfloating)):
        return _render([value.real, value.imag])
    if isinstance(value, str):
        return json.dumps(value)
    if value is None:
        return "null"
    raise InternalError(f"cannot serialize {type(value).__name__} in report")


def _emit_report(report: dict) -> None:
    sys.stdout.write(_render(report) + "\n")


def _skeleton(command: str, inputs: dict, tol: Tolerance, seed=None) -> dict:
    report: dict = {"command": command, "inputs": inputs}
    if seed is not None:
        report["seed"] = int(seed)
    report["tolerance"] = {"atol": tol.atol, "rank_tol": tol.rank_tol}
    report["results"] = {}
    return report


def _verification_fields(rep) -> dict:
    return {
        "residuals": dict(rep.residuals),
        "bounds": dict(rep.bounds),
        "verdict": bool(rep.verdict),
    }


def _read_matrix(path) -> tuple[Array, str]:
    obj, digest = _read_json(path)
    return parse_matrix_document(obj, name=str(path)), digest


def _tolerance(args, *mats) -> Tolerance:
    base = Tolerance.for_matrices(*mats) if mats else Tolerance.for_scale()
    atol, rank_tol = base.atol, base.rank_tol
    if args.atol is not None:
        if not (args.atol > 0 and math.isfinite(args.atol)):
            raise ParseError(f"--atol must be positive and finite, got {args.atol}")
        atol = args.atol
    if args.rank_tol is not None:
        if not (args.rank_tol > 0 and math.isfinite(args.rank_tol)):
            raise ParseError(f"--rank-tol must be positive and finite, got {args.rank_tol}")
        rank_tol = args.rank_tol
    return Tolerance(atol=atol, rank_tol=rank_tol)


def _usage_error(message: str) -> int:
    print(f"twoproj: error: {message}", file=sys.stderr)
    return 64


def _cmd_validate(args) -> int:
    p, dp = _read_matrix(args.p)
    q, dq = _read_matrix(args.q)
    tol = _tolerance(args, p, q)
    report = _skeleton("validate", {"p": dp, "q": dq}, tol)
    results: dict = {"kind": args.kind}
    report["results"] = results
    try:
        if args.kind == "orth":
            pair = make_orth_pair(p, q, tol)
        else:
            pair = make_idempotent_pair(p, q, tol)
    except (NotProjectionError, NotHermitianError, DimMismatchError) as exc:
        results["valid"] = False
        results["reason"] = str(exc)
        _emit_report(report)
        return 1
    results["valid"] = True
    if args.kind == "orth":
        results["supersymmetry"] = _verification_fields(verify_supersymmetry(pair, tol))
    _emit_report(report)
    return 0


def _cmd_decompose(args) -> int:
    p, dp = _read_matrix(args.p)
    q, dq = _read_matrix(args.q)
    tol = _tolerance(args, p, q)
    report = _skeleton("decompose", {"p": dp, "q": dq}, tol)
    pair = make_orth_pair(p, q, tol)
    dec = halmos_decompose(pair, tol)
    d = dec.dims
    report["results"] = {
        "dims": {"d00": d.d00, "d01": d.d01, "d10": d.d10, "d11": d.d11, "dm": d.dm},
        "h_eigenvalues": np.diag(dec.h).real,
        "w": dec.w,
        "bases": {
            "basis00": dec.basis00,
            "basis01": dec.basis01,
            "basis10": dec.basis10,
            "basis11": dec.basis11,
            "basis_m": dec.basis_m,
            "basis_mprime": dec.basis_mprime,
        },
    }
    _emit_report(report)
    return 0


def _cmd_classify(args) -> int:
    p, dp = _read_matrix(args.p)
    q, dq = _read_matrix(args.q)
    tol = _tolerance(args, p, q)
    report = _skeleton("classify", {"p": dp, "q": dq}, tol)
    pair = make_idempotent_pair(p, q, tol)
    rep = prop2_conditions(pair, tol)
    report["results"] = {
        "b_invertible": rep.b_invertible,
        "one_not_in_spectrum_a_squared": rep.one_not_in_spec_a2,
        "p_plus_2q_minus_i_invertible": rep.p2q_minus_i_invertible,
        "p_plus_2q_minus_2i_invertible": rep.p2q_minus_2i_invertible,
        "consistent": rep.consistent,
        "margins": dict(rep.margins),
    }
    _emit_report(report)
    verdict = (
        rep.b_invertible
        and rep.one_not_in_spec_a2
        and rep.p2q_minus_i_invertible
        and rep.p2q_minus_2i_invertible
    )
    return 0 if verdict else 1


def _general_params_from_doc(doc) -> IntertwinerParams:
    if not isinstance(doc, dict):
        raise ParseError("param file: expected a JSON object")
    allowed = {"u0", "u1", "u01", "u10", "v"}
    extra = doc.keys() - allowed
    if extra:
        raise ParseError(f"param file: unexpected keys {sorted(extra)}")

    def block(key: str) -> Array | None:
        value = doc.get(key)
        if value is None:
            return None
        return parse_matrix_document(value, name=f"param {key}")

    return IntertwinerParams(
        u0=block("u0"), u1=block("u1"), u01=block("u01"), u10=block("u10"), v=block("v")
    )


def _complex_from_doc(value, where: str) -> complex:
    if not isinstance(value, list) or len(value) != 2:
        raise ParseError(f"{where}: expected a [re, im] pair")
    return complex(
        _as_finite_float(value[0], f"{where}[0]"), _as_finite_float(value[1], f"{where}[1]")
    )


def _unimodular_params_from_doc(doc) -> UnimodularParams:
    if not isinstance(doc, dict):
        raise ParseError("param file: expected a JSON object")
    allowed = {"a0", "a1", "phi"}
    extra = doc.keys() - allowed
    if extra:
        raise ParseError(f"param file: unexpected keys {sorted(extra)}")
    a0 = doc.get("a0")
    a1 = doc.get("a1")
    phi = doc.get("phi")
    if a0 is not None:
        a0 = _complex_from_doc(a0, "param a0")
    if a1 is not None:
        a1 = _complex_from_doc(a1, "param a1")
    if phi is not None:
        if not isinstance(phi, list):
            raise ParseError("param phi: expected an array of [re, im] pairs")
        phi = np.array(
            [_complex_from_doc(v, f"param phi[{i}]") for i, v in enumerate(phi)],
            dtype=np.complex128,
        )
    return UnimodularParams(a0=a0, a1=a1, phi=phi)


def _wdd_s_from_doc(doc) -> Array:
    if not isinstance(doc, dict) or set(doc.keys()) != {"s"}:
        raise ParseError('param file: expected exactly the key "s"')
    return parse_matrix_document(doc["s"], name="param s")


def _cmd_intertwine(args) -> int:
    p, dp = _read_matrix(args.p)
    q, dq = _read_matrix(args.q)
    inputs = {"p": dp, "q": dq}
    takes_params = args.method in ("wdd", "general", "wstar")
    params_doc = None
    if args.param_file is not None and takes_params:
        if args.seed is not None:
            return _usage_error("pass --param-file or --seed, not both")
        params_doc, dparams = _read_json(args.param_file)
        inputs["params"] = dparams
    seed = args.seed if args.method in ("general", "wstar") and params_doc is None else None
    tol = _tolerance(args, p, q)
    report = _skeleton("intertwine", inputs, tol, seed=seed)
    results: dict = {"method": args.method}
    report["results"] = results

    def negative(reason: str) -> int:
        results["exists"] = False
        results["reason"] = reason
        _emit_report(report)
        return 1

    pair = make_orth_pair(p, q, tol)
    if args.method == "kato":
        try:
            u = kato_unitary(pair, tol)
        except NormTooLargeError as exc:
            return negative(str(exc))
    else:
        dec = halmos_decompose(pair, tol)
        d = dec.dims
        if args.method == "sgn":
            try:
                u = sgn_b(pair, dec, tol)
            except NotInjectiveError as exc:
                return negative(str(exc))
        elif args.method == "wdd":
            if not exists_symmetric_unitary(dec):
                return negative(f"corner dimensions differ: d01={d.d01}, d10={d.d10}")
            s = _wdd_s_from_doc(params_doc) if params_doc is not None else None
            u = wdd_unitary(dec, s, tol)
        elif args.method == "general":
            if not exists_symmetric_unitary(dec):
                return negative(f"corner dimensions differ: d01={d.d01}, d10={d.d10}")
            if params_doc is not None:
                params = _general_params_from_doc(params_doc)
            elif seed is not None:
                params = random_params(dec, seed, tol)
            else:
                params = identity_params(dec)
            u = general_unitary_halmos(dec, params, tol)
        else:
            if not exists_unitary_in_wstar(dec):
                return negative(f"mixed corners are nonzero: d01={d.d01}, d10={d.d10}")
            if params_doc is not None:
                wparams = _unimodular_params_from_doc(params_doc)
            elif seed is not None:
                wparams = random_unimodular_params(dec, seed, tol)
            else:
                wparams = default_unimodular_params(dec, tol)
            u = wstar_unitary(dec, wparams, tol)
    ver = verify_symmetric_intertwiner(pair, u, tol)
    results["exists"] = True
    results["u"] = u
    results["verification"] = _verification_fields(ver)
    _emit_report(report)
    return 0 if ver.verdict else 1


def _cmd_algebra(args) -> int:
    p, dp = _read_matrix(args.p)
    q, dq = _read_matrix(args.q)
    tol = _tolerance(args, p, q)
    report = _skeleton("algebra", {"p": dp, "q": dq}, tol)
    pair = make_orth_pair(p, q, tol)
    dec = halmos_decompose(pair, tol)
    if args.check == "wstar":
        verdict = exists_unitary_in_wstar(dec)
    elif args.check == "cstar":
        verdict = exists_unitary_in_cstar(pair, dec, tol)
    else:
        verdict = simple_spectrum_all_in(dec, tol)
    report["results"] = {"check": args.check, "verdict": bool(verdict)}
    _emit_report(report)
    return 0 if verdict else 1


def _cmd_verify(args) -> int:
    p, dp = _read_matrix(args.p)
    q, dq = _read_matrix(args.q)
    u, du = _read_matrix(args.u)
    tol = _tolerance(args, p, q)
    report = _skeleton("verify", {"p": dp, "q": dq, "u": du}, tol)
    pair = make_orth_pair(p, q, tol)
    rep = verify_symmetric_intertwiner(pair, u, tol)
    report["results"] = _verification_fields(rep)
    _emit_report(report)
    return 0 if rep.verdict else 1


def _cmd_random(args) -> int:
    tol = _tolerance(args)
    report = _skeleton("random", {}, tol, seed=args.seed)
    out = random_instance(
        args.kind, args.dim, args.seed, rank=args.rank, rank_p=args.rank_p, rank_q=args.rank_q
    )
    results: dict = {"kind": args.kind, "dim": args.dim}
    if isinstance(out, tuple):
        pm, qm = out
        results["p"] = pm
        results["q"] = qm
        if args.out_p:
            write_matrix_file(args.out_p, pm)
        if args.out_q:
            write_matrix_file(args.out_q, qm)
    else:
        results["matrix"] = out
        if args.out:
            write_matrix_file(args.out, out)
    report["results"] = results
    _emit_report(report)
    return 0


def _cmd_oracle(args) -> int:
    p, dp = _read_matrix(args.p)
    q, dq = _read_matrix(args.q)
    tol = _tolerance(args, p, q)
    report = _skeleton("oracle", {"p": dp, "q": dq}, tol)
    basis = oracle_intertwiner_space(p, q, tol, one_sided=args.one_sided)
    report["results"] = {
        "one_sided": bool(args.one_sided),
        "dimension": len(basis),
        "basis": list(basis),
    }
    _emit_report(report)
    return 0 if basis else 1


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage failures exit with code 64."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(64, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="twoproj", description="Analyze a pair of projection matrices.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name: str, help_text: str, func, pair: bool = True):
        sp = sub.add_parser(name, help=help_text, description=help_text)
        if pair:
            sp.add_argument("--p", required=True, metavar="FILE", help="first matrix file")
            sp.add_argument("--q", required=True, metavar="FILE", help="second matrix file")
        sp.add_argument("--atol", type=float, default=None, help="override the residual tolerance")
        sp.add_argument(
            "--rank-tol", type=float, default=None, help="override the rank-decision tolerance"
        )
        sp.set_defaults(func=func)
        return sp

    sp = add("validate", "Check that the pair satisfies its defining identities.", _cmd_validate)
    sp.add_argument(
        "--kind",
        choices=("orth", "idempotent"),
        default="orth",
        help="orthogonal projections (default) or plain idempotents",
    )

    add("decompose", "Report the canonical decomposition of an orthogonal pair.", _cmd_decompose)

    sp = add("intertwine", "Construct a unitary that swaps the two projections.", _cmd_intertwine)
    sp.add_argument(
        "--method",
        required=True,
        choices=("kato", "sgn", "wdd", "general", "wstar"),
        help="which construction to use",
    )
    sp.add_argument("--param-file", metavar="FILE", help="JSON parameters for the family methods")
    sp.add_argument("--seed", type=int, help="draw random parameters instead")

    add("classify", "Report the invertibility conditions for an idempotent pair.", _cmd_classify)

    sp = add("algebra", "Decide existence or membership questions in the pair algebra.", _cmd_algebra)
    sp.add_argument(
        "--check",
        required=True,
        choices=("wstar", "cstar", "simple"),
        help="which criterion to evaluate",
    )

    sp = add("verify", "Check a claimed swapping unitary against the pair.", _cmd_verify)
    sp.add_argument("--u", required=True, metavar="FILE", help="candidate unitary matrix file")

    sp = add("random", "Generate seeded random test matrices.", _cmd_random, pair=False)
    sp.add_argument(
        "--kind",
        required=True,
        choices=("unitary", "orth_projection", "orth_pair", "generic_orth_pair", "idempotent_pair"),
        help="what to generate",
    )
    sp.add_argument("--dim", type=int, required=True, help="ambient dimension")
    sp.add_argument("--rank", type=int, default=None, help="rank for single-matrix kinds")
    sp.add_argument("--rank-p", type=int, default=None, help="rank of the first matrix")
    sp.add_argument("--rank-q", type=int, default=None, help="rank of the second matrix")
    sp.add_argument("--seed", type=int, required=True, help="random seed")
    sp.add_argument("--out", metavar="FILE", help="write the single matrix here")
    sp.add_argument("--out-p", metavar="FILE", help="write the first matrix here")
    sp.add_argument("--out-q", metavar="FILE", help="write the second matrix here")

    sp = add("oracle", "Report a basis of the swapping-intertwiner space.", _cmd_oracle)
    sp.add_argument(
        "--one-sided",
        action="store_true",
        help="only require ZP = QZ instead of the symmetric pair of relations",
    )

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code is None:
            return 0
        return exc.code if isinstance(exc.code, int) else 64
    try:
        return args.func(args)
    except (TwoProjError, OSError) as exc:
        print(f"twoproj: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
