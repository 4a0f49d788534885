"""Command line interface.

Exit codes: 0 success, 1 invalid input, 2 an internal check failed.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .cf import as_fraction, cf_eval, cf_expand, format_rational, riemenschneider_dual
from .classify import ClassifierInput, InternalCheckError, Report, certificate_problems, classify
from .contact import INCONCLUSIVE
from .lattice import LatticeError, lattice_for
from .plumbing import PlumbingTree, dual_tree
from .seifert import SeifertInvariants

EXIT_OK, EXIT_INPUT, EXIT_CHECK = 0, 1, 2


class InputError(ValueError):
    pass


def _load_json(arg: str):
    """Literal JSON, ``-`` for stdin, ``@path`` or an existing file path."""
    try:
        if arg == "-":
            text = sys.stdin.read()
        elif arg.startswith("@"):
            with open(arg[1:]) as fh:
                text = fh.read()
        elif os.path.isfile(arg):
            with open(arg) as fh:
                text = fh.read()
        else:
            text = arg
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON from {arg[:60]!r}: {exc}") from exc


def _tree(arg: str) -> PlumbingTree:
    data = _load_json(arg)
    try:
        return PlumbingTree.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"invalid tree: {exc}") from exc


def _emit(args, payload: dict, text: str):
    if args.text:
        sys.stdout.write(text.rstrip("\n") + "\n")
    else:
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    sys.stdout.flush()


# ---------------------------------------------------------------------------


def _report_text(rep: Report) -> str:
    v = rep.verdict
    lines = [f"verdict: {v.outcome}" + (f" (n = {v.mn_index})" if v.mn_index else ""),
             f"provenance: {v.provenance}"]
    if rep.normalized is not None:
        lines.append(f"invariants: {rep.normalized}")
    lines += [f"  {s['rule']}: {s['detail']}" for s in rep.trace]
    if rep.certificate is not None:
        c = rep.certificate
        lines.append(f"certificate: family {c.family}, d3 = {c.d3}, d(-Y) = {c.d_minus_Y}, "
                     f"path of {len(c.path)} vectors")
    return "\n".join(lines)


def cmd_classify(args) -> int:
    try:
        if args.seifert is not None:
            data = _load_json(args.seifert)
            inp = ClassifierInput(seifert=SeifertInvariants.from_json(data),
                                  base_genus=args.base_genus,
                                  base_orientable=not args.non_orientable)
        elif args.tree is not None:
            inp = ClassifierInput(tree=_tree(args.tree))
        else:
            inp = ClassifierInput.from_json(_load_json(args.input))
        rep = classify(inp)
    except InternalCheckError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except (InputError, KeyError, TypeError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if rep.certificate is not None:
        problems = certificate_problems(rep)
        if problems:
            print("certificate failed re-verification: " + "; ".join(problems), file=sys.stderr)
            return EXIT_CHECK
    _emit(args, rep.to_json(), _report_text(rep))
    if rep.outcome == INCONCLUSIVE:
        print("criterion search failed on an in-family instance", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


def cmd_hf(args) -> int:
    try:
        tree = _tree(args.tree)
        lat = lattice_for(tree)
        table = lat.generators()
    except (InputError, LatticeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    count = sum(len(g) for g in table.values())
    lspace = count == abs(lat.det)
    classes = []
    for cls, gens in table.items():
        classes.append({"class": list(cls.representative),
                        "degrees": [str(g.degree) for g in gens],
                        "terminals": [list(g.terminal) for g in gens]})
    payload = {"det": lat.det, "generators": count, "l_space": lspace, "classes": classes}
    if lspace:
        payload["correction_terms"] = sorted((str(g[0].degree) for g in table.values()),
                                             key=as_fraction)
    lines = [f"|det| = {abs(lat.det)}, generators = {count}, L-space: {lspace}"]
    lines += [f"  {c['class']}: {', '.join(c['degrees'])}" for c in classes]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_dual(args) -> int:
    try:
        out = dual_tree(_tree(args.tree))
    except (InputError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    shape = out.star_shape()
    _emit(args, out.to_json(),
          f"center {shape.center_weight}; legs " + " ".join(str(list(l)) for l in shape.legs))
    return EXIT_OK


def cmd_cf(args) -> int:
    try:
        if args.op == "expand":
            if len(args.values) != 1:
                raise InputError("cf expand takes one rational")
            terms = cf_expand(as_fraction(args.values[0]))
            _emit(args, {"terms": list(terms)}, " ".join(map(str, terms)))
        elif args.op == "eval":
            val = cf_eval([int(x) for x in args.values])
            _emit(args, {"value": format_rational(val)}, format_rational(val))
        else:
            terms = riemenschneider_dual([int(x) for x in args.values])
            _emit(args, {"terms": list(terms)}, " ".join(map(str, terms)))
    except (InputError, ValueError, TypeError, ZeroDivisionError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        rep = Report.from_json(_load_json(args.report))
    except (InputError, KeyError, TypeError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if rep.certificate is None:
        print("invalid input: report carries no certificate", file=sys.stderr)
        return EXIT_INPUT
    problems = certificate_problems(rep)
    _emit(args, {"verified": not problems, "problems": problems},
          "pass" if not problems else "fail\n" + "\n".join(f"  {p}" for p in problems))
    return EXIT_OK if not problems else EXIT_CHECK


def cmd_paths(args) -> int:
    try:
        tree = _tree(args.tree)
        vec = _load_json(args.vector)
        if not isinstance(vec, list):
            raise InputError("vector must be a JSON list of integers")
        lat = lattice_for(tree)
        lat.check_algorithm_preconditions()
        if len(vec) != lat.n or not lat.is_characteristic(vec):
            raise InputError("vector is not characteristic for this tree")
        path = lat.full_path_through(vec)
    except (InputError, LatticeError, TypeError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if path is None:
        _emit(args, {"path": None}, "none")
        return EXIT_OK
    text = "\n".join([f"degree {path.degree}"] + [" ".join(map(str, s)) for s in path.steps])
    _emit(args, {"path": path.to_json()}, text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="seifert-tight",
                                description="Tight contact structures on Seifert fibered spaces.")
    fmt = argparse.ArgumentParser(add_help=False)
    g = fmt.add_mutually_exclusive_group()
    g.add_argument("--json", action="store_true", help="JSON output (default)")
    g.add_argument("--text", action="store_true", help="human-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[fmt], help="classify a Seifert space or plumbing tree")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--seifert", help='{"e0": -1, "ratios": ["1/2", ...]}')
    src.add_argument("--tree", help="tree JSON: vertices/edges or center/legs")
    src.add_argument("--input", help="full ClassifierInput JSON")
    c.add_argument("--base-genus", type=int, default=0)
    c.add_argument("--non-orientable", action="store_true", help="non-orientable base")
    c.set_defaults(func=cmd_classify)

    h = sub.add_parser("hf", parents=[fmt], help="generators and correction terms of a tree")
    h.add_argument("--tree", required=True)
    h.set_defaults(func=cmd_hf)

    d = sub.add_parser("dual", parents=[fmt], help="dual tree of a -1 centered star")
    d.add_argument("--tree", required=True)
    d.set_defaults(func=cmd_dual)

    f = sub.add_parser("cf", parents=[fmt], help="negative continued fractions")
    f.add_argument("op", choices=["expand", "eval", "dual"])
    f.add_argument("values", nargs="+")
    f.set_defaults(func=cmd_cf)

    v = sub.add_parser("verify", parents=[fmt], help="re-check the certificate in a report")
    v.add_argument("report")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("paths", parents=[fmt], help="full path through a characteristic vector")
    t.add_argument("--tree", required=True)
    t.add_argument("--vector", required=True, help="JSON list, ordered by vertex id")
    t.set_defaults(func=cmd_paths)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
