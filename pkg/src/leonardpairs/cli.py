"""Command-line front end: every library operation over JSON files.

One JSON document per invocation on standard output, rendered with
sorted keys and two-space indentation so identical inputs give
byte-identical outputs.  Standard error carries diagnostics only.
Exit codes: 0 for success, 1 for a domain-level negative result (not a
Leonard pair, invalid array, no fit) when --strict is set, 2 for
malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import re
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor

from .errors import LeonardPairsError
from .field import (
    Field,
    PrimeField,
    QuadraticExtension,
    Rationals,
    field_from_dict,
    field_to_dict,
)
from .generators import (
    NONEXAMPLE_KINDS,
    build_lattice,
    example2,
    lattice_pair,
    random_nonexample,
    random_parameter_array,
    sl2_pair,
    uq_pair,
)
from .leonard import (
    askey_wilson_to_dict,
    extract_parameter_array,
    fit_askey_wilson,
    is_leonard_pair,
    system_from_bidiagonal_pair,
    verification_report,
)
from .matrix import ExactMatrix, matrix_from_dict, matrix_to_dict
from .parray import (
    ParameterArray,
    check_poly_characterization,
    construct_bidiagonal,
    construct_tridiagonal,
    find_g_matrix,
    fingerprint,
    fingerprint_to_dict,
    parameter_array_from_dict,
    parameter_array_to_dict,
    poly_u,
    poly_u_dual,
    validate,
    validity_report_to_dict,
)

GEN_SOURCES = (
    "example2",
    "sl2",
    "uq",
    "lattice",
    "random-array",
    "random-nonexample",
)

_FIELD_FLAG = re.compile(
    r"^\s*(?:Q|QQ)\s*$|^\s*GF\(\s*(\d+)\s*\)\s*$|^\s*Q\(\s*sqrt\s*(-?\d+)\s*\)\s*$"
)


class _InputError(Exception):
    """Anything wrong with the invocation or its files; exits with 2."""


def parse_field_flag(text: str) -> Field:
    """Field names as printed by the library: Q, GF(p), Q(sqrt m)."""
    m = _FIELD_FLAG.match(text)
    if not m:
        raise _InputError(
            f"unrecognized field {text!r}; expected Q, GF(p), or Q(sqrt m)"
        )
    try:
        if m.group(1) is not None:
            return PrimeField(int(m.group(1)))
        if m.group(2) is not None:
            return QuadraticExtension(int(m.group(2)))
    except LeonardPairsError as exc:
        raise _InputError(str(exc)) from exc
    return Rationals()


def _read_json(path: str):
    try:
        if path == "-":
            text = sys.stdin.read()
            label = "<stdin>"
        else:
            with open(path, encoding="utf-8") as handle:
                text = handle.read()
            label = path
    except OSError as exc:
        raise _InputError(f"{path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise _InputError(
            f"{label}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc


def _field_from_obj(obj: dict, override: "Field | None", label: str) -> Field:
    if override is not None:
        return override
    if "field" not in obj:
        raise _InputError(f"{label}: no 'field' key and no --field override")
    try:
        return field_from_dict(obj["field"])
    except LeonardPairsError as exc:
        raise _InputError(f"{label}: {exc}") from exc


def _matrix_from_obj(obj, override: "Field | None", label: str) -> ExactMatrix:
    if not isinstance(obj, dict) or "rows" not in obj:
        raise _InputError(f"{label}: expected an object with 'field' and 'rows'")
    field = _field_from_obj(obj, override, label)
    try:
        return ExactMatrix(field, obj["rows"])
    except (LeonardPairsError, TypeError, ValueError) as exc:
        raise _InputError(f"{label}: {exc}") from exc


def _pair_from_args(args) -> tuple[ExactMatrix, ExactMatrix]:
    if args.pair is not None:
        if args.a is not None or args.astar is not None:
            raise _InputError("give either --pair or --a/--astar, not both")
        obj = _read_json(args.pair)
        if not isinstance(obj, dict) or "a" not in obj or "astar" not in obj:
            raise _InputError(f"{args.pair}: expected an object with 'a' and 'astar'")
        a = _matrix_from_obj(obj["a"], args.field_obj, f"{args.pair}#a")
        a_star = _matrix_from_obj(obj["astar"], args.field_obj, f"{args.pair}#astar")
    else:
        if args.a is None or args.astar is None:
            raise _InputError("need --a and --astar (or a combined --pair file)")
        a = _matrix_from_obj(_read_json(args.a), args.field_obj, args.a)
        a_star = _matrix_from_obj(_read_json(args.astar), args.field_obj, args.astar)
    if a.field != a_star.field:
        raise _InputError("the two matrices live in different fields")
    return a, a_star


def _parray_from_args(args) -> ParameterArray:
    obj = _read_json(args.infile)
    if not isinstance(obj, dict):
        raise _InputError(f"{args.infile}: expected a parameter-array object")
    try:
        if args.field_obj is not None:
            data = dict(obj)
            data["field"] = field_to_dict(args.field_obj)
            return parameter_array_from_dict(data)
        return parameter_array_from_dict(obj)
    except (LeonardPairsError, TypeError, ValueError, KeyError) as exc:
        raise _InputError(f"{args.infile}: {exc}") from exc


def _render(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _atomic_write(path: str, obj: dict) -> None:
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(_render(obj))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --- command handlers: each returns (payload, negative) ---


def _cmd_verify(args):
    if args.batch is not None:
        return _cmd_verify_batch(args)
    a, a_star = _pair_from_args(args)
    report = verification_report(a, a_star)
    return report, not report["is_leonard_pair"]


def _cmd_verify_batch(args):
    directory = args.batch
    if not os.path.isdir(directory):
        raise _InputError(f"{directory}: not a directory")
    names = sorted(
        name
        for name in os.listdir(directory)
        if name.endswith(".json") and not name.endswith(".report.json")
    )

    def one(name: str):
        path = os.path.join(directory, name)
        obj = _read_json(path)
        if not isinstance(obj, dict) or "a" not in obj or "astar" not in obj:
            raise _InputError(f"{path}: expected an object with 'a' and 'astar'")
        a = _matrix_from_obj(obj["a"], args.field_obj, f"{path}#a")
        a_star = _matrix_from_obj(obj["astar"], args.field_obj, f"{path}#astar")
        report = verification_report(a, a_star)
        report_name = name[: -len(".json")] + ".report.json"
        _atomic_write(os.path.join(directory, report_name), report)
        return report_name, report

    results: dict = {}
    errors: list[str] = []
    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        futures = [(name, pool.submit(one, name)) for name in names]
        for name, future in futures:
            try:
                report_name, report = future.result()
            except _InputError as exc:
                errors.append(str(exc))
                continue
            results[name] = {
                "diameter": report["diameter"],
                "is_leonard_pair": report["is_leonard_pair"],
                "report": report_name,
            }
    payload = {
        "checked": len(names),
        "errors": len(errors),
        "results": results,
    }
    if errors:
        for line in errors:
            print(f"error: {line}", file=sys.stderr)
        print(_render(payload), end="")
        raise SystemExit(2)
    negative = any(not row["is_leonard_pair"] for row in results.values())
    return payload, negative


def _cmd_extract(args):
    a, a_star = _pair_from_args(args)
    rec = is_leonard_pair(a, a_star)
    if not rec:
        payload = {
            "is_leonard_pair": False,
            "failure_reason": rec.failure_reason,
        }
        return payload, True
    return parameter_array_to_dict(extract_parameter_array(rec.canonical)), False


def _cmd_construct(args):
    pa = _parray_from_args(args)
    report = validate(pa)
    if not report.valid:
        payload = {"constructed": False, "validity": validity_report_to_dict(report)}
        return payload, True
    a, a_star = construct_bidiagonal(pa)
    return {"a": matrix_to_dict(a), "astar": matrix_to_dict(a_star)}, False


def _cmd_tdconstruct(args):
    pa = _parray_from_args(args)
    report = validate(pa)
    if not report.valid:
        payload = {"constructed": False, "validity": validity_report_to_dict(report)}
        return payload, True
    try:
        a, a_star = construct_tridiagonal(pa, split=args.split)
    except LeonardPairsError as exc:
        return {"constructed": False, "reason": str(exc)}, True
    return {"a": matrix_to_dict(a), "astar": matrix_to_dict(a_star)}, False


def _cmd_gmatrix(args):
    pa = _parray_from_args(args)
    report = validate(pa)
    if not report.valid:
        payload = {"found": False, "validity": validity_report_to_dict(report)}
        return payload, True
    res = find_g_matrix(pa)
    payload = {
        "found": res.found,
        "g": None if res.g is None else matrix_to_dict(res.g),
        "pencil_exhausted": res.pencil_exhausted,
        "solution_dimension": res.solution_dimension,
    }
    return payload, not res.found


def _cmd_polys(args):
    pa = _parray_from_args(args)
    report = validate(pa)
    pa12 = report.axiom("PA1").passed and report.axiom("PA2").passed
    if not pa12:
        payload = {"computable": False, "validity": validity_report_to_dict(report)}
        return payload, True
    ser = pa.field.serialize
    us = [poly_u(pa, i) for i in range(pa.d + 1)]
    duals = [poly_u_dual(pa, i) for i in range(pa.d + 1)]
    agrees = check_poly_characterization(pa)
    payload = {
        "d": pa.d,
        "field": field_to_dict(pa.field),
        "u": [[ser(c) for c in p.coeffs] for p in us],
        "u_dual": [[ser(c) for c in p.coeffs] for p in duals],
        "poly_characterization": agrees,
    }
    return payload, not agrees


def _cmd_awfit(args):
    a, a_star = _pair_from_args(args)
    fit = fit_askey_wilson(a, a_star)
    return askey_wilson_to_dict(fit), not fit.found


def _cmd_classify(args):
    pa = _parray_from_args(args)
    report = validate(pa)
    if not report.valid:
        payload = {
            "valid": False,
            "fingerprint": None,
            "validity": validity_report_to_dict(report),
        }
        return payload, True
    payload = {"valid": True, "fingerprint": fingerprint_to_dict(fingerprint(pa))}
    return payload, False


def _cmd_validate_array(args):
    pa = _parray_from_args(args)
    report = validate(pa)
    return validity_report_to_dict(report), not report.valid


def _cmd_roundtrip(args):
    pa = _parray_from_args(args)
    report = validate(pa)
    if not report.valid:
        payload = {
            "valid": False,
            "identical": None,
            "validity": validity_report_to_dict(report),
        }
        return payload, True
    a, a_star = construct_bidiagonal(pa)
    back = extract_parameter_array(system_from_bidiagonal_pair(a, a_star))
    identical = back == pa
    payload = {
        "valid": True,
        "identical": identical,
        "parameter_array": parameter_array_to_dict(back),
    }
    return payload, not identical


def _parse_combo(text: str, field: Field, flag: str):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise _InputError(f"{flag} wants three comma-separated coefficients x,y,z")
    try:
        return tuple(field.coerce(p) for p in parts)
    except (LeonardPairsError, TypeError, ValueError) as exc:
        raise _InputError(f"{flag}: {exc}") from exc


def _coerce_flag(field: Field, text: str, flag: str):
    try:
        return field.coerce(text)
    except (LeonardPairsError, TypeError, ValueError) as exc:
        raise _InputError(f"{flag}: {exc}") from exc


def _cmd_gen(args):
    field = args.field_obj if args.field_obj is not None else Rationals()
    source = args.source
    if source == "example2":
        a, a_star, p = example2(field)
        payload = {
            "source": source,
            "params": {"field": field_to_dict(field)},
            "a": matrix_to_dict(a),
            "astar": matrix_to_dict(a_star),
            "transition": matrix_to_dict(p),
        }
        return payload, False
    if source == "sl2":
        combo = _parse_combo(args.combo, field, "--combo")
        combo_star = _parse_combo(args.combo_star, field, "--combo-star")
        a, a_star = sl2_pair(field, args.d, combo, combo_star)
        payload = {
            "source": source,
            "params": {
                "field": field_to_dict(field),
                "d": args.d,
                "combo": [field.serialize(c) for c in combo],
                "combo_star": [field.serialize(c) for c in combo_star],
            },
            "a": matrix_to_dict(a),
            "astar": matrix_to_dict(a_star),
        }
        return payload, False
    if source == "uq":
        q = _coerce_flag(field, args.q, "--q")
        alpha = _coerce_flag(field, args.alpha, "--alpha")
        beta = _coerce_flag(field, args.beta, "--beta")
        epsilon = _coerce_flag(field, args.epsilon, "--epsilon")
        a, a_star, allowed = uq_pair(
            field, args.d, q, alpha=alpha, beta=beta, epsilon=epsilon
        )
        payload = {
            "source": source,
            "params": {
                "field": field_to_dict(field),
                "d": args.d,
                "q": field.serialize(q),
                "alpha": field.serialize(alpha),
                "beta": field.serialize(beta),
                "epsilon": field.serialize(epsilon),
            },
            "allowed": allowed,
            "a": matrix_to_dict(a),
            "astar": matrix_to_dict(a_star),
        }
        return payload, not allowed
    if source == "lattice":
        try:
            prime_power = int(args.q)
        except ValueError as exc:
            raise _InputError("--q must be a prime power integer for lattice") from exc
        lat = build_lattice(args.n, prime_power)
        alpha = _coerce_flag(lat.field, args.alpha, "--alpha")
        if args.beta is None:
            beta = lat.field.coerce(prime_power**args.n)
        else:
            beta = _coerce_flag(lat.field, args.beta, "--beta")
        a, a_star, dec = lattice_pair(lat, alpha, beta)
        payload = {
            "source": source,
            "params": {
                "field": field_to_dict(lat.field),
                "n": args.n,
                "q": prime_power,
                "alpha": lat.field.serialize(alpha),
                "beta": lat.field.serialize(beta),
            },
            "counts": list(dec.counts),
            "multiplicities": {
                str(d): c for d, c in sorted(dec.multiplicities().items())
            },
            "a": matrix_to_dict(a),
            "astar": matrix_to_dict(a_star),
        }
        return payload, False
    if source == "random-array":
        rng = random.Random(args.seed)
        pa = random_parameter_array(field, args.d, rng)
        payload = {
            "source": source,
            "seed": args.seed,
            "params": {"field": field_to_dict(field), "d": args.d},
            "parameter_array": parameter_array_to_dict(pa),
        }
        return payload, False
    if source == "random-nonexample":
        rng = random.Random(args.seed)
        a, a_star, kind = random_nonexample(field, args.size, rng, args.kind)
        payload = {
            "source": source,
            "seed": args.seed,
            "params": {
                "field": field_to_dict(field),
                "size": args.size,
                "kind": kind,
            },
            "a": matrix_to_dict(a),
            "astar": matrix_to_dict(a_star),
        }
        return payload, False
    raise _InputError(f"unknown source {source!r}")


_HANDLERS = {
    "verify": _cmd_verify,
    "extract": _cmd_extract,
    "construct": _cmd_construct,
    "tdconstruct": _cmd_tdconstruct,
    "gmatrix": _cmd_gmatrix,
    "polys": _cmd_polys,
    "awfit": _cmd_awfit,
    "classify": _cmd_classify,
    "validate-array": _cmd_validate_array,
    "gen": _cmd_gen,
    "roundtrip": _cmd_roundtrip,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="leonardpairs",
        description="Exact recognition, construction and classification "
        "of Leonard pairs over Q, GF(p) and Q(sqrt m).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument(
            "--field",
            default=None,
            help="field override: Q, GF(p), or Q(sqrt m); "
            "replaces the field named in the input files",
        )
        p.add_argument(
            "--strict",
            action="store_true",
            help="exit 1 on domain-level negative results",
        )

    def pair_args(p):
        p.add_argument("--a", help="matrix JSON file ('-' for stdin)")
        p.add_argument("--astar", help="matrix JSON file ('-' for stdin)")
        p.add_argument(
            "--pair", help="combined JSON file with keys 'a' and 'astar'"
        )

    def infile_arg(p):
        p.add_argument(
            "--in",
            dest="infile",
            required=True,
            help="parameter-array JSON file ('-' for stdin)",
        )

    p = sub.add_parser("verify", help="full cross-validation report for a pair")
    common(p)
    pair_args(p)
    p.add_argument("--batch", help="verify every *.json pair file in a directory")
    p.add_argument("--jobs", type=int, default=4, help="batch worker threads")

    p = sub.add_parser("extract", help="canonical parameter array of a pair")
    common(p)
    pair_args(p)

    p = sub.add_parser("construct", help="split bidiagonal pair from an array")
    common(p)
    infile_arg(p)

    p = sub.add_parser(
        "tdconstruct", help="tridiagonal/diagonal pair from an array"
    )
    common(p)
    infile_arg(p)
    p.add_argument(
        "--split",
        choices=("unit", "symmetric"),
        default="unit",
        help="off-diagonal split of the products",
    )

    p = sub.add_parser("gmatrix", help="reversal intertwiner for an array")
    common(p)
    infile_arg(p)

    p = sub.add_parser("polys", help="the polynomials u_i and their duals")
    common(p)
    infile_arg(p)

    p = sub.add_parser("awfit", help="Askey-Wilson relation fit for a pair")
    common(p)
    pair_args(p)

    p = sub.add_parser("classify", help="fingerprint family of a valid array")
    common(p)
    infile_arg(p)

    p = sub.add_parser("validate-array", help="per-axiom validity report")
    common(p)
    infile_arg(p)

    p = sub.add_parser("gen", help="emit a generated pair or array as JSON")
    common(p)
    p.add_argument("--source", required=True, choices=GEN_SOURCES)
    p.add_argument("--d", type=int, default=3, help="diameter (sl2, uq, random-array)")
    p.add_argument("--n", type=int, default=3, help="lattice rank")
    p.add_argument(
        "--q",
        default="2",
        help="uq: field element string; lattice: prime power integer",
    )
    p.add_argument("--alpha", default="1", help="uq/lattice scale")
    p.add_argument("--beta", default=None, help="uq/lattice scale")
    p.add_argument("--epsilon", default="1", help="uq sign")
    p.add_argument("--combo", default="0,0,1", help="sl2: x,y,z for x e + y f + z h")
    p.add_argument("--combo-star", default="1,1,0", help="sl2: the second combination")
    p.add_argument("--size", type=int, default=4, help="random-nonexample matrix size")
    p.add_argument(
        "--kind",
        default=None,
        choices=NONEXAMPLE_KINDS,
        help="random-nonexample failure class (default: seeded choice)",
    )
    p.add_argument("--seed", type=int, default=0, help="seed, echoed in the output")

    p = sub.add_parser(
        "roundtrip", help="construct then re-extract an array and compare"
    )
    common(p)
    infile_arg(p)

    return parser


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.field_obj = None
    try:
        if args.field is not None:
            args.field_obj = parse_field_flag(args.field)
        if args.command == "gen" and args.beta is None and args.source != "lattice":
            args.beta = "1"
        payload, negative = _HANDLERS[args.command](args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        return int(exc.code or 0)
    except LeonardPairsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(_render(payload), end="")
    if negative and args.strict:
        return 1
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


__all__ = ["GEN_SOURCES", "build_parser", "main", "parse_field_flag", "run"]
