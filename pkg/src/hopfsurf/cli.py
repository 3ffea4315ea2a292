"""Command-line interface: ``hopfsurf <subcommand> ...``.

Exit codes: 0 success, 1 a negative answer (not homeomorphic, rejected),
2 unknown / malformed / unparsable input, 3 finite-type surface.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from hopfsurf import __version__
from hopfsurf import certificate as cert_mod
from hopfsurf import endspace as es
from hopfsurf.dot import certificate_to_dot, ends_to_dot
from hopfsurf.dsl import parse_descriptor, parse_expr
from hopfsurf.errors import HopfError, ParseError
from hopfsurf.hopf import DEFAULT_DEPTH, build_hopf_map, classify_case, CASES
from hopfsurf.surface import genus_json, genus_text, is_finite_type, surfaces_homeomorphic

EXIT_OK, EXIT_NO, EXIT_UNKNOWN, EXIT_FINITE = 0, 1, 2, 3


def _source(arg):
    """An argument is a file path if such a file exists, else inline text."""
    p = Path(arg)
    try:
        if p.is_file():
            return p.read_text(encoding="utf-8")
    except OSError:
        pass
    return arg


def _emit(args, human, machine):
    if args.json:
        print(json.dumps(machine, sort_keys=True))
    else:
        print(human)


def _default_depth():
    raw = os.environ.get("HOPF_DEPTH")
    if raw is None:
        return DEFAULT_DEPTH
    try:
        depth = int(raw)
    except ValueError:
        raise HopfError("E_DEPTH", f"HOPF_DEPTH={raw!r} is not an integer") from None
    if depth < 1:
        raise HopfError("E_DEPTH", "HOPF_DEPTH must be at least 1")
    return depth


def cmd_classify(args):
    d = parse_descriptor(_source(args.desc))
    nf = es.normalize(d.ends)
    info = {"genus": genus_json(d.genus), "ends": es.to_text(nf),
            "isolated": str(es.isolated_census(d.ends))}
    if is_finite_type(d):
        info.update(type="finite", case=None)
        human = "finite-type (Hopfian)"
    else:
        case = classify_case(d)
        info.update(type="infinite", case=case)
        human = f"infinite-type; case {CASES.index(case) + 1} ({case})"
    human += f"\ngenus: {genus_text(d.genus)}\nends: {es.to_text(nf)}"
    _emit(args, human, info)
    return EXIT_OK


def cmd_equiv(args):
    a = parse_descriptor(_source(args.left))
    b = parse_descriptor(_source(args.right))
    v = surfaces_homeomorphic(a, b)
    if isinstance(v, es.Homeomorphic):
        _emit(args, f"Homeomorphic\nnormal form: {es.to_text(v.normal_form)}",
              {"verdict": "Homeomorphic", "normal_form": es.to_text(v.normal_form)})
        return EXIT_OK
    if isinstance(v, es.NotHomeomorphic):
        _emit(args, f"NotHomeomorphic({v.invariant}: {v.left} vs {v.right})",
              {"verdict": "NotHomeomorphic", "invariant": v.invariant,
               "left": str(v.left), "right": str(v.right)})
        return EXIT_NO
    _emit(args, "Unknown", {"verdict": "Unknown"})
    return EXIT_UNKNOWN


def cmd_ends(args):
    e = parse_expr(_source(args.expr))
    if args.action == "normalize":
        nf, steps = es.normalize_with_trace(e)
        human = es.to_text(nf)
        if args.trace:
            human = "\n".join([f"{s.rule} at {list(s.path)}: {s.before} -> {s.after}" for s in steps]
                              + [human])
        _emit(args, human, {"normal_form": human.splitlines()[-1],
                            "trace": [s.to_json() for s in steps]})
    else:
        der = es.derive(e)
        _emit(args, es.to_text(der), {"derivative": es.to_text(der)})
    return EXIT_OK


def cmd_build(args):
    d = parse_descriptor(_source(args.desc))
    depth = args.depth if args.depth is not None else _default_depth()
    cert = build_hopf_map(d, depth)
    text = cert_mod.dumps(cert) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        _emit(args, f"wrote {args.output} ({cert['case']}, degree {cert['degree']['total']:+d})",
              {"output": args.output, "case": cert["case"], "degree": cert["degree"]["total"]})
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args):
    doc = cert_mod.loads(Path(args.cert).read_text(encoding="utf-8"))
    result = cert_mod.verify(doc)
    _emit(args, str(result), {"accepted": result.accepted, "clause": result.clause or None,
                              "reason": result.reason or None})
    return EXIT_OK if result else EXIT_NO


def cmd_viz(args):
    text = _source(args.input)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        doc = None
    if isinstance(doc, dict) and "schema" in doc:
        dot = certificate_to_dot(doc)
        kind = "certificate"
    else:
        dot = ends_to_dot(parse_descriptor(text).ends)
        kind = "ends"
    Path(args.dot).write_text(dot, encoding="utf-8")
    _emit(args, f"wrote {args.dot}", {"output": args.dot, "kind": kind})
    return EXIT_OK


def make_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    p = argparse.ArgumentParser(prog="hopfsurf", parents=[common],
                                description="Non-Hopfian self-maps of infinite-type surfaces.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", parents=[common], help="finite/infinite type and case")
    s.add_argument("desc", help="descriptor text or file")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("equiv", parents=[common], help="compare two descriptors")
    s.add_argument("left")
    s.add_argument("right")
    s.set_defaults(func=cmd_equiv)

    s = sub.add_parser("ends", parents=[common], help="end-space expression tools")
    s.add_argument("action", choices=["normalize", "derive"])
    s.add_argument("expr", help="end expression text or file")
    s.add_argument("--trace", action="store_true", help="print the rewrite steps")
    s.set_defaults(func=cmd_ends)

    s = sub.add_parser("build", parents=[common], help="construct and certify a map")
    s.add_argument("desc")
    s.add_argument("-o", "--output", help="certificate path (.hopfcert); stdout if omitted")
    s.add_argument("--depth", type=int, help="exhaustion depth (default $HOPF_DEPTH or 3)")
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("verify", parents=[common], help="check a certificate")
    s.add_argument("cert")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("viz", parents=[common], help="emit Graphviz DOT")
    s.add_argument("input", help="descriptor or certificate (text or file)")
    s.add_argument("--dot", required=True, help="output path")
    s.set_defaults(func=cmd_viz)
    return p


def _fail(args, code, exc):
    info = {"error": getattr(exc, "code", "E_IO"), "message": str(exc)}
    if isinstance(exc, ParseError):
        info.update(line=exc.line, column=exc.column)
    if getattr(args, "json", False):
        print(json.dumps(info, sort_keys=True))
    else:
        print(f"error: {exc}", file=sys.stderr)
    return code


def run(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except HopfError as exc:
        return _fail(args, EXIT_FINITE if exc.code == "E_FINITE_TYPE" else EXIT_UNKNOWN, exc)
    except (OSError, UnicodeDecodeError) as exc:
        return _fail(args, EXIT_UNKNOWN, exc)


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
