"""Command-line interface.

Every subcommand reads a diagram as JSON (``--in FILE`` or ``--in -`` for
stdin), prints a JSON document on stdout and reports problems on stderr.
Exit codes: 0 success, 1 the property in question fails (for example the
diagram is not AFB), 2 invalid input or usage.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import oracle
from .embedding import EmbeddedDiagram
from .errors import (
    AFBError,
    AFBViolation,
    BoundaryNotSimple,
    DiagramError,
    InternalIrreversible,
    NoZero,
    NotAFB,
    NotConnected,
    NotValidated,
    PosetError,
    SearchBudgetExceeded,
    VerificationFailed,
)
from .geometry import PlaneDiagram, validate
from .poset import Realizer, dimension_exact, is_realizer, unfold
from .realizers import (
    MinPairAnalysis,
    cover_min_pairs,
    realize_afb,
    realize_planar_with_zero,
    realizer_from_dict,
    realizer_to_dict,
)
from .reduction import reduce_to_min_covered
from .svg import render_svg

OK, FAILS, INVALID = 0, 1, 2

# errors meaning "the input is fine but lacks the property asked about"
PROPERTY_FAILURES = (AFBViolation, BoundaryNotSimple, NoZero, NotConnected,
                     InternalIrreversible, VerificationFailed)


class UsageError(Exception):
    pass


def _read(path, stdin):
    if path == "-":
        return stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_diagram(args, stdin):
    if not args.inp:
        raise UsageError("--in is required")
    try:
        data = json.loads(_read(args.inp, stdin))
    except (OSError, json.JSONDecodeError) as exc:
        raise DiagramError(f"cannot read diagram: {exc}") from None
    return PlaneDiagram.from_dict(data)


def _embedding(args, stdin):
    return EmbeddedDiagram(_load_diagram(args, stdin))


def _write_out(args, text):
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text)


# -- subcommands ---------------------------------------------------------------


def cmd_validate(args, stdin):
    report = validate(_load_diagram(args, stdin))
    return (OK if report.ok else INVALID), report.to_dict()


def cmd_afb_check(args, stdin):
    ok, bad = _embedding(args, stdin).afb_check()
    return (OK if ok else FAILS), {"afb": ok, "violators": list(bad)}


def cmd_envelope(args, stdin):
    return OK, _embedding(args, stdin).envelope_order().to_dict()


def cmd_classify(args, stdin):
    emb = _embedding(args, stdin)
    an = MinPairAnalysis(emb)
    profiles = {y: an.profile(y).to_dict() for y in emb.poset.elements}
    labels = [an.label(x, y).to_dict() for x, y in an.min_pairs()]
    family = cover_min_pairs(emb, mode=args.mode, analysis=an)
    return OK, {"envelope": an.env.to_dict(), "profiles": profiles, "labels": labels,
                "cover": family.to_dict()}


def cmd_realize(args, stdin):
    emb = _embedding(args, stdin)
    method = args.method
    if method == "auto":
        method = "afb" if emb.afb_check()[0] else ("zero" if emb.poset.zero() is not None else None)
        if method is None:
            raise NotAFB(emb.afb_check()[1])
    if method == "afb":
        R, prov = realize_afb(emb, mode=args.mode)
        data = realizer_to_dict(R, prov)
    else:
        data = realizer_to_dict(realize_planar_with_zero(emb))
    data["method"] = method
    data["size"] = len(data["extensions"])
    text = json.dumps(data, sort_keys=True)
    if args.out:
        _write_out(args, text + "\n")
    return OK, data


def cmd_dimension(args, stdin):
    if args.verify_realizer == "-" and args.inp == "-":
        raise UsageError("only one of --in and --verify-realizer may read stdin")
    P = _load_diagram(args, stdin).poset
    out = {}
    code = OK
    if args.verify_realizer:
        try:
            R = realizer_from_dict(json.loads(_read(args.verify_realizer, stdin)))
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
            raise DiagramError(f"cannot read realizer: {exc}") from None
        try:
            ok = is_realizer(P, Realizer(tuple(tuple(e) for e in R)))
        except PosetError as exc:
            ok = False
            out["reason"] = str(exc)
        out["realizer_ok"] = ok
        out["realizer_size"] = len(R)
        if not ok:
            code = FAILS
    try:
        dim = dimension_exact(P, max_k=args.max_k, max_inc=args.oracle_limit)
        out["dimension"] = dim
        out["exceeded"] = dim is None
    except SearchBudgetExceeded as exc:
        out["dimension"] = None
        out["exceeded"] = True
        out["reason"] = str(exc)
    return code, out


def cmd_reduce(args, stdin):
    emb = _embedding(args, stdin)
    big, proxy = reduce_to_min_covered(emb)
    data = {
        "diagram": big.diagram.to_dict(),
        "proxy": {f"({x},{y})": m for (x, y), m in sorted(proxy.items())},
        "added": sorted(set(big.diagram.vertices) - set(emb.diagram.vertices)),
    }
    if args.out:
        _write_out(args, big.diagram.to_json(sort_keys=True) + "\n")
    return OK, data


def cmd_unfold(args, stdin):
    P = _load_diagram(args, stdin).poset
    x0 = args.x0 if args.x0 is not None else (P.minimal_elements() or (None,))[0]
    if x0 is None:
        raise UsageError("the poset is empty")
    U = unfold(P, x0)
    return OK, {"x0": x0, "layers": [sorted(layer) for layer in U.layers]}


def cmd_render(args, stdin):
    emb = _embedding(args, stdin)
    env = None
    if args.envelope:
        try:
            env = emb.envelope_order()
        except AFBError as exc:
            print(f"envelope overlay skipped: {exc}", file=sys.stderr)
    paths = []
    for spec in args.path or ():
        try:
            x, y = spec.split(",")
        except ValueError:
            raise UsageError(f"--path expects x,y but got {spec!r}") from None
        for side in ("left", "right"):
            paths.append(emb.extremal_path(x, y, side))
    svg = render_svg(emb.diagram, envelope=env, paths=paths)
    if args.out:
        _write_out(args, svg)
        return OK, {"out": args.out, "vertices": len(emb.diagram.vertices)}
    return OK, svg


def cmd_generate(args, stdin):
    if args.shape == "adversarial":
        d = oracle.adversarial_non_afb(args.seed)
    else:
        d = oracle.random_afb_diagram(oracle.CorpusSpec(args.seed, args.n, args.shape))
    data = d.to_dict()
    if args.out:
        _write_out(args, d.to_json(sort_keys=True) + "\n")
    return OK, data


def cmd_cross_check(args, stdin):
    d = _load_diagram(args, stdin)
    report = oracle.cross_check(d, oracle_limit=args.oracle_limit, mode=args.mode,
                                replay_dir=args.replay_dir)
    return (OK if report["ok"] else FAILS), report


COMMANDS = {
    "validate": cmd_validate,
    "afb-check": cmd_afb_check,
    "envelope": cmd_envelope,
    "classify": cmd_classify,
    "realize": cmd_realize,
    "dimension": cmd_dimension,
    "reduce": cmd_reduce,
    "unfold": cmd_unfold,
    "render": cmd_render,
    "generate": cmd_generate,
    "cross-check": cmd_cross_check,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    parser = _Parser(prog="afbposet", description="Dimension of planar posets accessible from below.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, help_text, inp=True):
        p = sub.add_parser(name, help=help_text)
        if inp:
            p.add_argument("--in", dest="inp", metavar="FILE", help="diagram JSON, or - for stdin")
        return p

    add("validate", "check every diagram invariant")
    add("afb-check", "test whether every minimal element is accessible from below")
    add("envelope", "counter-clockwise order of the minimal elements")
    p = add("classify", "profiles and labels of the Min x P pairs")
    p.add_argument("--mode", choices=("five", "seven"), default="five")
    p = add("realize", "construct a realizer")
    p.add_argument("--mode", choices=("five", "seven"), default="five")
    p.add_argument("--method", choices=("auto", "afb", "zero"), default="auto")
    p.add_argument("--out", help="also write the realizer JSON here")
    p = add("dimension", "exact dimension by search, optionally verifying a realizer")
    p.add_argument("--verify-realizer", metavar="FILE", help="realizer JSON, or - for stdin")
    p.add_argument("--max-k", type=int, default=6)
    p.add_argument("--oracle-limit", type=int, default=60)
    p = add("reduce", "graft minimal elements so that every pair has a minimal proxy")
    p.add_argument("--out", help="also write the reduced diagram JSON here")
    p = add("unfold", "alternating down-set/up-set layers from one element")
    p.add_argument("--x0", help="start element (default: the first minimal element)")
    p = add("render", "draw the diagram as SVG")
    p.add_argument("--out", help="SVG file (default: stdout)")
    p.add_argument("--envelope", action="store_true", help="overlay the envelope")
    p.add_argument("--path", action="append", metavar="X,Y",
                   help="overlay the left-most and right-most witnessing paths from X to Y")
    p = add("generate", "random diagram from the corpus generators", inp=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=12)
    p.add_argument("--shape", choices=oracle.SHAPES, default="stacked")
    p.add_argument("--out", help="also write the diagram JSON here")
    p = add("cross-check", "compare the constructions with the exact oracle")
    p.add_argument("--mode", choices=("five", "seven"), default="five")
    p.add_argument("--oracle-limit", type=int, default=60)
    p.add_argument("--replay-dir", help="directory for replay files of failures")
    return parser


def _error_payload(exc):
    return {"error": type(exc).__name__, "message": str(exc)}


def run(argv=None, stdin=None, stdout=None):
    """Run one command; returns the exit status."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required: " + ", ".join(COMMANDS))
        code, payload = COMMANDS[args.command](args, stdin)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        code, payload = INVALID, _error_payload(exc)
    except NotValidated as exc:
        print(f"invalid diagram: {exc}", file=sys.stderr)
        code, payload = INVALID, {"error": "NotValidated", "violations": exc.report.to_dict()["violations"]}
    except NotAFB as exc:
        print(f"not AFB: {exc}", file=sys.stderr)
        code, payload = FAILS, {"error": "NotAFB", "afb": False, "violators": list(exc.violators)}
    except PROPERTY_FAILURES as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        code, payload = FAILS, _error_payload(exc)
    except (DiagramError, PosetError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        code, payload = INVALID, _error_payload(exc)
    except AFBError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        code, payload = FAILS, _error_payload(exc)
    if isinstance(payload, str):
        stdout.write(payload)
    else:
        stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
