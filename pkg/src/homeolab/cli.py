"""Command-line front end.

Every command prints one JSON document (or CSV with ``--csv``) to stdout.
Exit codes: 0 success, 2 input error, 3 piece-count ceiling exceeded,
4 undetermined verdict under ``--strict``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from importlib import resources
from typing import Any, Sequence

from . import circle_dynamics as cd
from . import interval_dynamics as idyn
from . import random_lab as lab
from . import spectral as sp
from .formats import dumps, emit_map_obj, map_from_obj
from .pl_core import CeilingExceeded, MapError, PLMap, set_piece_ceiling, sign_word
from .rational import fmt, rat

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CEILING = 3
EXIT_UNDETERMINED = 4


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        names = ", ".join(sorted(schema_names()))
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.stderr.write(f"input/output schemas shipped with the package: {names}\n")
        sys.exit(EXIT_INPUT)


def schema_names() -> list[str]:
    root = resources.files("homeolab") / "schemas"
    return [p.name for p in root.iterdir() if p.name.endswith(".json")]


def load_schema(name: str) -> dict:
    text = (resources.files("homeolab") / "schemas" / name).read_text()
    return json.loads(text)


# ---------------------------------------------------------------------------
# input helpers


def _read_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from None


def _load_map(path: str, expect: str | None = None):
    try:
        return map_from_obj(_read_json(path), expect)
    except MapError as exc:
        raise InputError(f"{path}: {exc.kind} error: {exc}") from None


def _load_op(path: str) -> sp.GenPermUnitary:
    try:
        return sp.operator_from_obj(_read_json(path))
    except sp.OperatorError as exc:
        raise InputError(f"{path}: {exc}") from None


def _rational_arg(text: str):
    try:
        return rat(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


# ---------------------------------------------------------------------------
# commands; each returns (payload, undetermined)


def cmd_classify_interval(a):
    f = _load_map(a.map, "interval")
    return idyn.classify(f).to_json(), False


def cmd_classify_circle(a):
    F = _load_map(a.lift, "lift")
    cls = cd.classify_circle(F, a.qmax, a.niter)
    return cls.to_json(), isinstance(cls, cd.CircleUndetermined)


def cmd_conjugate(a):
    if (a.map is None) == (a.lift is None):
        raise InputError("give exactly one of --map or --lift, plus --g")
    if a.g is None:
        raise InputError("--g is required")
    if a.map is not None:
        f, g = _load_map(a.map, "interval"), _load_map(a.g, "interval")
        return idyn.conjugate_decision(f, g).to_json(), False
    F, G = _load_map(a.lift, "lift"), _load_map(a.g, "lift")
    d = cd.conjugate_decision_circle(F, G, a.qmax, a.niter)
    return d.to_json(), d.verdict == "undetermined"


def cmd_rotnum(a):
    F = _load_map(a.lift, "lift")
    rot, _ = cd.rotation_number(F, a.qmax, a.niter)
    if isinstance(rot, cd.RationalRotation):
        return {"rational": str(rot)}, False
    return {"enclosure": [fmt(rot.lo), fmt(rot.hi)], "n_iter": a.niter, "q_max": a.qmax}, True


def cmd_represent(a):
    if a.p is not None or a.q is not None:
        if a.p is None or a.q is None or a.k is None:
            raise InputError("circle representatives need --p, --q and --k")
        try:
            return emit_map_obj(cd.representative_circle(a.p, a.q, a.k)), False
        except ValueError as exc:
            raise InputError(str(exc)) from None
    if a.n is None:
        raise InputError("interval representatives need --n (and optionally --sign)")
    try:
        return emit_map_obj(idyn.representative(a.n, a.sign)), False
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_collapse(a):
    F = _load_map(a.lift, "lift")
    try:
        H, F2 = cd.orbit_collapse(F, q_max=a.qmax)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    cls = cd.classify_circle(F2, a.qmax, a.niter)
    return {"h": emit_map_obj(H), "result": emit_map_obj(F2), "classification": cls.to_json()}, False


def _config(a) -> lab.SamplerConfig:
    try:
        return lab.SamplerConfig(a.trials, a.seed, a.bits, a.qmax, a.niter)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_sample_interval(a):
    g = _load_map(a.g, "interval")
    return lab.experiment_interval(g, _config(a), a.workers), False


def cmd_sample_circle(a):
    F = _load_map(a.lift, "lift")
    return lab.experiment_circle(F, _config(a), a.workers), False


def cmd_spectral(a):
    U = _load_op(a.op)
    if a.theta is not None:
        U = sp.rotate(U, a.theta)
    out = {"dim": U.dim, "atoms": sp.spectral_data(U).to_json()}
    if a.g is not None:
        V = _load_op(a.g)
        try:
            out["conjugate"] = sp.conjugate_decision_unitary(U, V)
        except sp.OperatorError as exc:
            raise InputError(str(exc)) from None
    return out, False


def cmd_bochner(a):
    U = _load_op(a.op)
    if not 0 <= a.index < U.dim:
        raise InputError(f"--index {a.index} out of range for dimension {U.dim}")
    v = sp.bochner_coeff(U, a.index, a.n)
    return {"index": a.index, "n": a.n, "value": None if v is None else fmt(v)}, False


def validate_payload(obj: Any) -> tuple[list[dict], dict]:
    """Schema check followed by the constructor's invariant checks."""
    import jsonschema

    if isinstance(obj, dict) and "perm" in obj:
        schema, kind = "operator.schema.json", "operator"
    else:
        schema, kind = "map.schema.json", obj.get("kind", "map") if isinstance(obj, dict) else "map"
    validator = jsonschema.Draft202012Validator(load_schema(schema))
    diags = [
        {"kind": "schema", "path": "/".join(str(p) for p in e.absolute_path), "message": e.message}
        for e in sorted(validator.iter_errors(obj), key=lambda e: list(map(str, e.absolute_path)))
    ]
    report: dict = {"payload": kind}
    if diags:
        return diags, report
    try:
        if kind == "operator":
            U = sp.operator_from_obj(obj)
            report["atoms"] = sp.spectral_data(U).to_json()
        else:
            f = map_from_obj(obj)
            report["pieces"] = f.pieces
            if isinstance(f, PLMap):
                report["sign_word"] = sign_word(f).to_json()
                report["classification"] = idyn.classify(f).to_json()
            else:
                report["classification"] = cd.classify_circle(f).to_json()
    except MapError as exc:
        diags.append({"kind": exc.kind, "path": "", "message": str(exc)})
    except sp.OperatorError as exc:
        diags.append({"kind": "invariant", "path": "", "message": str(exc)})
    return diags, report


def cmd_validate(a):
    try:
        with open(a.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        out = {"file": a.file, "valid": False,
               "diagnostics": [{"kind": "io", "path": "", "message": str(exc.strerror)}]}
        return out, False
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        out = {"file": a.file, "valid": False,
               "diagnostics": [{"kind": "syntax", "path": "", "message": str(exc)}]}
        return out, False
    diags, report = validate_payload(obj)
    out = {"file": a.file, "valid": not diags, "diagnostics": diags}
    if not diags:
        out["report"] = report
    return out, False


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="homeolab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        sp_ = sub.add_parser(name, help=help_)
        sp_.set_defaults(fn=fn)
        sp_.add_argument("--csv", action="store_true", help="emit CSV instead of JSON")
        sp_.add_argument("--strict", action="store_true", help="exit 4 on undetermined verdicts")
        sp_.add_argument("--ceiling", type=_positive, help="piece-count ceiling")
        return sp_

    def circle_opts(s):
        s.add_argument("--qmax", type=_positive, default=cd.DEFAULT_QMAX)
        s.add_argument("--niter", type=_positive, default=cd.DEFAULT_NITER)

    s = add("classify-interval", cmd_classify_interval, "classify a PL map of [0, 1]")
    s.add_argument("--map", required=True)

    s = add("classify-circle", cmd_classify_circle, "classify a PL circle map given by a lift")
    s.add_argument("--lift", required=True)
    circle_opts(s)

    s = add("conjugate", cmd_conjugate, "decide conjugacy of two maps or two lifts")
    s.add_argument("--map")
    s.add_argument("--lift")
    s.add_argument("--g")
    circle_opts(s)

    s = add("rotnum", cmd_rotnum, "rotation number of a lift")
    s.add_argument("--lift", required=True)
    circle_opts(s)

    s = add("represent", cmd_represent, "canonical representative of a class")
    s.add_argument("--n", type=int, help="interior fixed points (interval)")
    s.add_argument("--sign", default="+", choices=["+", "-"], help="first gap sign (interval)")
    s.add_argument("--p", type=int)
    s.add_argument("--q", type=int)
    s.add_argument("--k", type=int)

    s = add("collapse", cmd_collapse, "remove two periodic orbits from a lift")
    s.add_argument("--lift", required=True)
    circle_opts(s)

    for name, fn, flag in (
        ("sample-interval", cmd_sample_interval, "--g"),
        ("sample-circle", cmd_sample_circle, "--lift"),
    ):
        s = add(name, fn, "Monte Carlo experiment over the witness family")
        s.add_argument(flag, required=True)
        s.add_argument("--trials", type=_positive, default=1000)
        s.add_argument("--seed", type=int, default=7)
        s.add_argument("--bits", type=int, default=32)
        s.add_argument("--workers", type=_positive, default=1)
        circle_opts(s)

    s = add("spectral", cmd_spectral, "spectral data of a generalized permutation unitary")
    s.add_argument("--op", required=True)
    s.add_argument("--theta", type=_rational_arg, help="rotate by this angle first")
    s.add_argument("--g", help="second operator to test for unitary equivalence")

    s = add("bochner", cmd_bochner, "matrix coefficient <U^n e_i, e_i>")
    s.add_argument("--op", required=True)
    s.add_argument("--index", type=int, required=True)
    s.add_argument("--n", type=int, required=True)

    s = add("validate", cmd_validate, "check a map, lift or operator file")
    s.add_argument("file")
    return p


def _flat_csv(payload: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["field", "value"])
    for k in sorted(payload):
        v = payload[k]
        w.writerow([k, v if isinstance(v, str) else dumps(v)])
    return buf.getvalue()


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    set_piece_ceiling(args.ceiling)
    try:
        result, undetermined = args.fn(args)
    except InputError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except CeilingExceeded as exc:
        sys.stderr.write(f"ceiling exceeded: {exc}\n")
        return EXIT_CEILING
    finally:
        set_piece_ceiling(None)
    if isinstance(result, lab.ExperimentReport):
        text = result.to_csv() if args.csv else dumps(result.to_json()) + "\n"
        undetermined = False
    else:
        text = _flat_csv(result) if args.csv else dumps(result) + "\n"
    out.write(text)
    if args.command == "validate" and not result["valid"]:
        return EXIT_INPUT
    if undetermined and args.strict:
        return EXIT_UNDETERMINED
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
