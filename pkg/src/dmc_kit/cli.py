"""Command line front end.

Exit codes: 0 when the checked property holds (or the command succeeded),
1 when it fails, 2 for usage or document errors.  Reports are JSON on stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import repro
from .classify import (
    default_jobs,
    is_globally_dmc,
    is_integrally_convex,
    is_lnat,
    is_locally_dmc,
    is_submodular,
)
from .dmcset import PointSet, check_dmc_set, d0_decompose, d1_decompose, d2_decompose, scale_set, steps_decompose
from .envelope import envelope_value
from .funcs import DocumentError, QuadraticFn, load_function
from .lattice import DmcError, format_ext, parse_box, parse_point, parse_rational
from .optimize import brute_force_min, scaling_minimize, steepest_descent_2n
from .quadratic import quad_classify

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

CHECKERS = {
    "submodular": lambda f, box, jobs: is_submodular(f, box, jobs),
    "dmc2": lambda f, box, jobs: is_locally_dmc(f, box, jobs),
    "dmc-ge2": lambda f, box, jobs: is_globally_dmc(f, box, jobs),
    "lnat": lambda f, box, jobs: is_lnat(f, box, jobs),
    "intconv": lambda f, box, jobs: is_integrally_convex(f, box, jobs),
}
STAGES = {"steps": steps_decompose, "d0": d0_decompose, "d1": d1_decompose, "d2": d2_decompose}


class UsageError(Exception):
    pass


def _emit(doc) -> None:
    sys.stdout.write(repro.dumps(doc))


def _read_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: invalid JSON: {exc}") from None


def _load_fn(path: str):
    return load_function(_read_json(path))


def _box_for(f, text: str | None):
    if text is not None:
        box = parse_box(text)
        if box.dim != f.dim:
            raise UsageError(f"--box has dimension {box.dim}, function has {f.dim}")
        return box
    if f.box is None:
        raise UsageError("the function declares no box; pass --box")
    return f.box


def _point_for(f, text: str):
    x = parse_point(text)
    if len(x) != f.dim:
        raise UsageError(f"point has dimension {len(x)}, function has {f.dim}")
    return x


def cmd_classify(args) -> int:
    f = _load_fn(args.fn)
    if args.cls == "quad":
        if not isinstance(f, QuadraticFn):
            raise UsageError("--class quad needs a quadratic document")
        doc = quad_classify(f.Q).to_json()
        doc["class"] = "quad"
        _emit(doc)
        return EXIT_OK
    box = _box_for(f, args.box)
    verdict = CHECKERS[args.cls](f, box, args.jobs)
    _emit(verdict.to_json(args.cls, box))
    return EXIT_OK if verdict.holds else EXIT_FAIL


def cmd_minimize(args) -> int:
    f = _load_fn(args.fn)
    if args.algo == "brute":
        box = _box_for(f, args.box)
        value, arg = brute_force_min(f, box)
        _emit({"algo": "brute", "box": box.to_json(), "value": format_ext(value),
               "argmin": [list(p) for p in arg]})
        return EXIT_OK
    if args.start is None:
        raise UsageError(f"--algo {args.algo} needs --start")
    x0 = _point_for(f, args.start)
    if args.algo == "sd2":
        clip = parse_box(args.box) if args.box else None
        trace = steepest_descent_2n(f, x0, budget=args.budget, clip=clip)
        doc = trace.to_json()
        doc["algo"] = "sd2"
        _emit(doc)
        return EXIT_OK if trace.terminated == "minimizer found" else EXIT_FAIL
    trace = scaling_minimize(f, x0, args.kinf)
    doc = trace.to_json()
    doc["algo"] = "scaling"
    _emit(doc)
    return EXIT_OK


def cmd_decompose(args) -> int:
    v = parse_point(args.vector)
    dec = STAGES[args.stage](v)
    dec.validate()
    doc = dec.to_json()
    doc["conditions"] = dec.conditions()
    _emit(doc)
    return EXIT_OK


def cmd_envelope(args) -> int:
    f = _load_fn(args.fn)
    try:
        at = tuple(parse_rational(t) for t in args.at.split(","))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if len(at) != f.dim:
        raise UsageError(f"--at has dimension {len(at)}, function has {f.dim}")
    res = envelope_value(f, at)
    _emit({"at": [str(c) for c in at], "value": format_ext(res.value),
           "certificate": [{"z": list(z), "lambda": str(lam)} for z, lam in sorted(res.certificate.items())]})
    return EXIT_OK if res.finite else EXIT_FAIL


def cmd_set_check(args) -> int:
    S = PointSet.from_json(_read_json(args.set))
    doc = {}
    if args.scale is not None:
        if args.scale < 1:
            raise UsageError("--scale must be a positive integer")
        S = scale_set(S, args.scale)
        doc["scaled"] = S.to_json()
    verdict = check_dmc_set(S)
    doc.update(verdict.to_json("dmc-set", None))
    _emit(doc)
    return EXIT_OK if verdict.holds else EXIT_FAIL


def cmd_repro(args) -> int:
    if args.list:
        _emit({"examples": sorted(repro.EXAMPLES)})
        return EXIT_OK
    if args.example is None:
        raise UsageError("repro needs --example or --list")
    try:
        produced = repro.run_example(args.example)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    sys.stdout.write(produced)
    expected = repro.pinned(args.example)
    if produced != expected:
        sys.stderr.write(f"repro {args.example}: output differs from the pinned report\n")
        return EXIT_FAIL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dmc-kit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)

    c = sub.add_parser("classify", help="decide class membership on a box")
    c.add_argument("--class", dest="cls", required=True, choices=[*CHECKERS, "quad"])
    c.add_argument("--fn", required=True, help="function document (JSON)")
    c.add_argument("--box", help="lo1..hi1,lo2..hi2,...")
    c.add_argument("--jobs", type=int, default=default_jobs())
    c.set_defaults(run=cmd_classify)

    m = sub.add_parser("minimize", help="minimize a function")
    m.add_argument("--algo", required=True, choices=["sd2", "scaling", "brute"])
    m.add_argument("--fn", required=True)
    m.add_argument("--start", help="initial point, e.g. 3,0")
    m.add_argument("--kinf", type=int, help="l-inf diameter of dom f (scaling)")
    m.add_argument("--box", help="search box (brute) or clip box (sd2)")
    m.add_argument("--budget", type=int, help="iteration budget (sd2)")
    m.set_defaults(run=cmd_minimize)

    d = sub.add_parser("decompose", help="split a vector into {-1,0,1} steps")
    d.add_argument("--vector", required=True)
    d.add_argument("--stage", default="d2", choices=list(STAGES))
    d.set_defaults(run=cmd_decompose)

    e = sub.add_parser("envelope", help="local convex envelope at a rational point")
    e.add_argument("--fn", required=True)
    e.add_argument("--at", required=True, help="e.g. 1/2,1/2")
    e.set_defaults(run=cmd_envelope)

    s = sub.add_parser("set-check", help="is a point set midpoint convex?")
    s.add_argument("--set", required=True, help='{"dim": n, "points": [...]}')
    s.add_argument("--scale", type=int)
    s.set_defaults(run=cmd_set_check)

    r = sub.add_parser("repro", help="re-run a worked example against its pinned report")
    r.add_argument("--example", help=", ".join(sorted(repro.EXAMPLES)))
    r.add_argument("--list", action="store_true")
    r.set_defaults(run=cmd_repro)
    return p


# values of these flags may start with "-", which argparse would take for an option
_SIGNED_FLAGS = ("--box", "--start", "--vector", "--at")


def _join_signed(argv: list[str]) -> list[str]:
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _SIGNED_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_join_signed(sys.argv[1:] if argv is None else list(argv)))
    if getattr(args, "jobs", 1) is not None and getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be >= 1")
    try:
        return args.run(args)
    except (UsageError, DocumentError) as exc:
        sys.stderr.write(f"dmc-kit: error: {exc}\n")
        return EXIT_USAGE
    except (DmcError, ValueError) as exc:
        sys.stderr.write(f"dmc-kit: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
