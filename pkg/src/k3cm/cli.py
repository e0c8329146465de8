"""Command-line front end.

Exit codes: 0 success, 1 data inconsistency or rejected hypothesis,
2 malformed input document.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

import jsonschema

from . import acceptance
from .arith import RationalPoly, fundamental_discriminant, primes_below
from .crystal import (
    DEFAULT_PRECISION,
    LocalFieldData,
    artin_invariant_via_cokernel,
    build_beta,
    fixed_module_basis,
    fixed_span_cokernel_length,
)
from .errors import InconsistentData, InvalidInput, K3CMError
from .fields import Biquadratic, Cyclotomic, ImagQuadratic, analyze_place, field_from_dict
from .frobenius import FrobCharPoly, analyze
from .kummer import KummerInput, counterexample_report, known_answer, kummer_cm_data
from .lattices import GramMatrix, nonsplit_criterion, singular_normal_form
from .predictor import K3CmInput, cross_validate, input_from_dict, predict_reduction, predict_singular

EXIT_OK, EXIT_DATA, EXIT_SCHEMA = 0, 1, 2

_FIELD_SCHEMA = {
    "oneOf": [
        {
            "type": "object",
            "properties": {"type": {"const": "imag_quadratic"}, "D": {"type": "integer"}},
            "required": ["type", "D"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "type": {"const": "biquadratic"},
                "D1": {"type": "integer"},
                "D2": {"type": "integer"},
            },
            "required": ["type", "D1", "D2"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {"type": {"const": "cyclotomic"}, "N": {"type": "integer"}},
            "required": ["type", "N"],
            "additionalProperties": False,
        },
    ]
}

_GRAM_SCHEMA = {
    "type": "array",
    "items": {"type": "array", "items": {"type": "integer"}},
}

_FROB_SCHEMA = {
    "type": "object",
    "properties": {
        "q": {"type": "integer", "minimum": 2},
        "p": {"type": "integer", "minimum": 2},
        "coefficients": {"type": "string"},
    },
    "required": ["q", "coefficients"],
    "additionalProperties": False,
}

PREDICT_SCHEMA = {
    "type": "object",
    "properties": {
        "field": _FIELD_SCHEMA,
        "p": {"type": "integer", "minimum": 2},
        "disc_pic_mod_p_nonzero": {"type": ["boolean", "null"]},
        "order_maximal_at_p": {"type": ["boolean", "null"]},
        "gram": _GRAM_SCHEMA,
        "frobenius": _FROB_SCHEMA,
    },
    "required": ["field", "p"],
    "additionalProperties": False,
}

SINGULAR_SCHEMA = {
    "type": "object",
    "properties": {"gram": _GRAM_SCHEMA, "p": {"type": "integer", "minimum": 2}},
    "required": ["gram", "p"],
    "additionalProperties": False,
}

FROBENIUS_SCHEMA = {**_FROB_SCHEMA, "required": ["q", "p", "coefficients"]}


class SchemaError(Exception):
    pass


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def load_document(path: str, schema: dict) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    validate(doc, schema, path)
    return doc


def validate(doc, schema: dict, source: str = "<input>") -> None:
    errors = sorted(jsonschema.Draft202012Validator(schema).iter_errors(doc), key=lambda e: list(e.path))
    if errors:
        err = errors[0]
        where = "$" + "".join(f"[{k}]" if isinstance(k, int) else f".{k}" for k in err.path)
        raise SchemaError(f"{source}: {where}: {err.message}")


# -- output -----------------------------------------------------------------------------


def _table(record: dict, indent: int = 0) -> list[str]:
    lines = []
    width = max((len(str(k)) for k in record), default=0)
    for key in sorted(record):
        value = record[key]
        pad = " " * indent
        if isinstance(value, dict) and value:
            lines.append(f"{pad}{key}:")
            lines.extend(_table(value, indent + 2))
        elif isinstance(value, list) and value and all(isinstance(v, (dict, str)) for v in value):
            lines.append(f"{pad}{key}:")
            for item in value:
                if isinstance(item, dict):
                    lines.extend(_table(item, indent + 4))
                    lines.append("")
                else:
                    lines.append(f"{pad}  - {item}")
        else:
            lines.append(f"{pad}{str(key).ljust(width)}  {json.dumps(value) if not isinstance(value, str) else value}")
    return lines


def emit(obj, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(dumps(obj) + "\n")
    else:
        out.write("\n".join(_table(obj)) + "\n")


# -- subcommands ---------------------------------------------------------------------------


def cmd_predict(args) -> int:
    doc = load_document(args.input, PREDICT_SCHEMA)
    inp = input_from_dict(doc)
    report = predict_reduction(inp)
    out = report.to_dict()
    if args.cross_validate:
        out["validation"] = cross_validate(report, inp, precision=args.precision).to_dict()
    emit(out, args.format)
    return EXIT_OK


def _parse_gram(text: str) -> GramMatrix:
    try:
        vals = [int(t) for t in text.split(",")]
    except ValueError:
        raise SchemaError(f"--gram: expected integers a1,a2,a3, got {text!r}") from None
    if len(vals) == 3:
        return GramMatrix.binary(*vals)
    if len(vals) == 4 and vals[1] == vals[2]:
        return GramMatrix.of([vals[:2], vals[2:]])
    raise SchemaError("--gram: expected a1,a2,a3 (or four symmetric entries)")


def cmd_singular(args) -> int:
    if args.input:
        doc = load_document(args.input, SINGULAR_SCHEMA)
        gram, p = GramMatrix.of(doc["gram"]), doc["p"]
    else:
        if args.gram is None or args.p is None:
            raise SchemaError("singular: give --gram and --p, or --input")
        gram, p = _parse_gram(args.gram), args.p
    emit(predict_singular(gram, p).to_dict(), args.format)
    return EXIT_OK


def cmd_frobenius(args) -> int:
    if args.input:
        doc = load_document(args.input, FROBENIUS_SCHEMA)
        q, p, coeffs = doc["q"], doc["p"], doc["coefficients"]
    else:
        if args.poly is None or args.p is None:
            raise SchemaError("frobenius: give --poly and --p, or --input")
        q, p, coeffs = args.q or args.p, args.p, args.poly
    fp = FrobCharPoly(q=q, p=p, poly=RationalPoly.parse(coeffs))
    emit(analyze(fp, strict=args.strict).to_dict(), args.format)
    return EXIT_OK


def _vector_to_list(x) -> list:
    return [[list(c) for c in comp] for comp in x]


def cmd_crystal(args) -> int:
    try:
        eis = tuple(int(t) for t in args.eisenstein.split(",")) if args.eisenstein else ()
    except ValueError:
        raise SchemaError(f"--eisenstein: expected integers, got {args.eisenstein!r}") from None
    lfd = LocalFieldData(args.p, args.d, args.e, eis)
    crystal = build_beta(lfd, precision=args.precision, residue_degree=args.residue_degree)
    fixed = fixed_module_basis(crystal)
    coker = artin_invariant_via_cokernel(crystal)
    out = {
        "local_field": lfd.to_dict(),
        "precision": crystal.ring.N,
        "residue_degree": crystal.ring.m,
        "witt_modulus": list(crystal.ring.modulus),
        "d_prime": lfd.d_prime,
        "beta": crystal.beta_table(),
        "fixed_module": {
            "start_component": fixed.start_index,
            "rank_mod_p": fixed.rank_mod_p,
            "achieved_precision": fixed.achieved_precision,
            "seeds": [list(s) for s in fixed.seeds],
        },
        "cokernel": coker.to_dict(),
        "fixed_span_cokernel_length": fixed_span_cokernel_length(crystal, fixed),
        "artin_invariant": coker.length,
        "diagnostics": list(crystal.diagnostics),
    }
    if args.vectors:
        out["fixed_module"]["vectors"] = [_vector_to_list(x) for x in fixed.vectors]
    emit(out, args.format)
    return EXIT_OK


def cmd_kummer(args) -> int:
    spec, picard = kummer_cm_data(KummerInput(args.D1, args.D2))
    out = {"field": spec.to_dict(), "label": spec.label(), "picard_complex": picard}
    if args.p is not None:
        if args.D1 != args.D2:
            out["finding"] = counterexample_report(args.p, args.D1, args.D2).to_dict()
        else:
            report = predict_reduction(K3CmInput(spec, args.p))
            known = known_answer(args.D1, args.D2, args.p)
            out["report"] = report.to_dict()
            out["known_artin_invariant"] = known.artin_invariant if known else None
    emit(out, args.format)
    return EXIT_OK


# sweeps: each cell is a pure call, merged by sorted key


def _crystal_cell(cell):
    p, d, e, N, m = cell
    crystal = build_beta(LocalFieldData(p, d, e), N, m)
    fixed = fixed_module_basis(crystal)
    artin = artin_invariant_via_cokernel(crystal).length
    return {
        "key": f"p={p},d={d:02d},e={e},N={N:02d},m={m:02d}",
        "artin": artin,
        "fixed_rank": fixed.rank_mod_p,
        "ok": artin == d // 2 and fixed.rank_mod_p == d * e,
    }


def _singular_cell(p):
    agree = total = 0
    for a1, a2, a3 in acceptance.admissible_grams():
        disc = a2 * a2 - a1 * a3
        if disc % p == 0:
            continue
        nf = singular_normal_form(GramMatrix.binary(a1, a2, a3), p)
        split = analyze_place(ImagQuadratic(fundamental_discriminant(disc)), p).split_q_in_E
        total += 1
        agree += nonsplit_criterion(nf) != split
    return {"key": f"p={p:03d}", "checked": total, "agree": agree, "ok": agree == total}


def _predict_cell(cell):
    spec_dict, p = cell
    spec = field_from_dict(spec_dict)
    try:
        rep = predict_reduction(K3CmInput(spec, p, True, True))
        ok = (rep.height == rep.place["local_degree"]) != rep.supersingular
        return {"key": f"{spec.label()} p={p:03d}", "picard": rep.picard, "ok": ok}
    except InconsistentData:
        return {"key": f"{spec.label()} p={p:03d}", "picard": None, "ok": True, "inconsistent": True}


def worker_count(requested: Optional[int]) -> int:
    if requested:
        return requested
    env = os.environ.get("K3CM_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise SchemaError(f"K3CM_WORKERS must be an integer, got {env!r}") from None
    return 1


def run_cells(fn, cells, workers: int) -> list[dict]:
    if workers <= 1:
        results = [fn(c) for c in cells]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(fn, cells))
    return sorted(results, key=lambda r: r["key"])


def cmd_sweep(args) -> int:
    workers = worker_count(args.workers)
    if args.grid == "crystal":
        cells = list(acceptance.crystal_grid())
        results = run_cells(_crystal_cell, cells, workers)
    elif args.grid == "singular":
        results = run_cells(_singular_cell, primes_below(args.max_prime), workers)
    else:
        specs = [ImagQuadratic(D).to_dict() for D in acceptance.NEG_FUNDAMENTAL]
        specs += [Biquadratic(-4, D).to_dict() for D in acceptance.NEG_FUNDAMENTAL if D != -4]
        specs += [Cyclotomic(N).to_dict() for N in acceptance.CYCLO_N]
        cells = [(s, p) for s in specs for p in primes_below(args.max_prime)]
        results = run_cells(_predict_cell, cells, workers)
    ok = all(r["ok"] for r in results)
    emit({"grid": args.grid, "cells": len(results), "ok": ok, "results": results}, args.format)
    return EXIT_OK if ok else EXIT_DATA


def cmd_selftest(args) -> int:
    results = acceptance.run_all()
    if args.format == "json":
        emit(
            {
                "passed": all(r.passed for r in results),
                "criteria": [
                    {"number": r.number, "name": r.name, "passed": r.passed, "detail": r.detail}
                    for r in results
                ],
            },
            "json",
        )
    else:
        for r in results:
            print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_DATA


# -- parser ----------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "table"], default="json")

    parser = argparse.ArgumentParser(prog="k3cm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("predict", parents=[common], help="reduction invariants from CM-field data")
    p.add_argument("--input", required=True, help="JSON document, or - for stdin")
    p.add_argument("--cross-validate", action="store_true")
    p.add_argument("--precision", type=int, default=8, help="Witt precision for the crystal check")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("singular", parents=[common], help="Picard-20 K3 from its transcendental lattice")
    p.add_argument("--gram", help="a1,a2,a3 for [[a1,a2],[a2,a3]]")
    p.add_argument("--p", type=int)
    p.add_argument("--input")
    p.set_defaults(func=cmd_singular)

    p = sub.add_parser("frobenius", parents=[common], help="analyze a Frobenius characteristic polynomial")
    p.add_argument("--poly", help="comma-separated rational coefficients, constant term first")
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--strict", action="store_true", help="require a slope-symmetric Newton polygon")
    p.add_argument("--input")
    p.set_defaults(func=cmd_frobenius)

    p = sub.add_parser("crystal", parents=[common], help="explicit F-crystal and its cokernel length")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--e", type=int, default=1)
    p.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    p.add_argument("--residue-degree", type=int)
    p.add_argument("--eisenstein", help="coefficients a0,...,a_{e-1},1 (default T^e - p)")
    p.add_argument("--vectors", action="store_true", help="include the fixed vectors")
    p.set_defaults(func=cmd_crystal)

    p = sub.add_parser("kummer", parents=[common], help="Kummer surface of a product of CM curves")
    p.add_argument("--D1", type=int, default=-20)
    p.add_argument("--D2", type=int, default=-15)
    p.add_argument("--p", type=int, default=5)
    p.set_defaults(func=cmd_kummer)

    p = sub.add_parser("sweep", parents=[common], help="property grids")
    p.add_argument("--grid", choices=["crystal", "singular", "predict"], default="singular")
    p.add_argument("--max-prime", type=int, default=100)
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("selftest", help="run the acceptance suite")
    p.add_argument("--format", choices=["json", "table"], default="table")
    p.set_defaults(func=cmd_selftest)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except InconsistentData as exc:
        print(f"inconsistent data: {exc}", file=sys.stderr)
        return EXIT_DATA
    except InvalidInput as exc:
        print(f"rejected input: {exc}", file=sys.stderr)
        return EXIT_DATA
    except K3CMError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(run())
