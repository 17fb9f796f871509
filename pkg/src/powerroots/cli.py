"""Command line entry point.

Exit codes: 0 success or covered, 1 definitive negative, 2 usage or
validation error.  Certificates go to stdout (or ``--out``) as sorted,
indented JSON so identical inputs give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .errors import PowerRootsError
from .group_ctx import validate_spec
from .io import (certificate_to_dict, comparison_table, comparison_to_dict, dumps, load_spec, parse_element,
                 regularity_to_dict)

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_ERROR)


def _build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="powerroots", description="k-th roots in triangular matrix groups")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, element=True, k=True):
        p.add_argument("spec", help="group spec file (JSON)")
        if element:
            p.add_argument("--element", required=True, help='e.g. "g1^2*n(1,0)" or a matrix literal')
        if k:
            p.add_argument("--k", type=int, required=True)
        p.add_argument("--series", choices=("superdiag", "refined"), default="superdiag")
        p.add_argument("--cap", type=int, default=None, help="enumeration cap over GF(p)")
        p.add_argument("--out", help="write the certificate here instead of stdout")
        p.add_argument("--verify", action="store_true",
                       help="recheck the emitted certificate independently before exiting")

    a = sub.add_parser("analyze", help="decide whether the coset of an element is covered by k-th powers")
    common(a)
    a.add_argument("--element-level", action="store_true",
                   help="decide membership of the element itself instead of its coset")
    r = sub.add_parser("root", help="construct an explicit k-th root")
    common(r)
    o = sub.add_parser("oracle", help="compare the criterion with enumeration for all classes")
    common(o, element=False, k=False)
    o.add_argument("--kmax", type=int, required=True)
    o.add_argument("--csv", action="store_true")
    g = sub.add_parser("regular", help="P_k-regularity of an element")
    common(g)
    v = sub.add_parser("verify", help="recheck a certificate file against its spec")
    v.add_argument("certificate")
    v.add_argument("spec")
    return ap


def _context(args):
    spec = load_spec(args.spec)
    if args.cap is not None:
        from dataclasses import replace
        spec = replace(spec, cap=args.cap)
    return validate_spec(spec)


def _emit(args, doc) -> str:
    text = dumps(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return text


def _self_verify(args, doc, ctx) -> int:
    from .verify import verify_certificate
    res = verify_certificate(json.loads(dumps(doc)), ctx.spec)
    for line in res.lines():
        print(line, file=sys.stderr)
    return EXIT_OK if res.ok else EXIT_ERROR


def _note(msg: str):
    print(msg, file=sys.stderr)


def cmd_analyze(args) -> int:
    from .roots import coset_root_decision, element_root_certificate
    ctx = _context(args)
    x = parse_element(ctx, args.element)
    if args.element_level:
        cert, probe = element_root_certificate(ctx, x, args.k, args.series)
        if probe.member is None:
            _note(f"undecided: {probe.note}")
            return EXIT_ERROR
    else:
        cert = coset_root_decision(ctx, x, args.k, args.series)
    doc = certificate_to_dict(cert, ctx, args.element)
    _emit(args, doc)
    if cert.decision:
        _note(f"covered: witness class ({','.join(map(str, cert.witness))})")
    else:
        for ob in cert.obstructions:
            _note(f"not covered: class ({','.join(map(str, ob['b']))}) obstructed on layer {ob['layer']} "
                  f"by vector ({','.join(map(str, ob['vector']))})")
        if not cert.obstructions:
            _note("not covered")
    if args.verify and _self_verify(args, doc, ctx):
        return EXIT_ERROR
    return EXIT_OK if cert.decision else EXIT_NEGATIVE


def cmd_root(args) -> int:
    from .roots import construct_root, coset_root_decision
    ctx = _context(args)
    x = parse_element(ctx, args.element)
    cert = coset_root_decision(ctx, x, args.k, args.series, ns=[ctx.identity])
    if cert.decision:
        y = construct_root(ctx, x, ctx.identity, cert.witness, args.k, args.series)
        cert.roots = [(ctx.identity, y)]
        cert.verify(ctx)
    doc = certificate_to_dict(cert, ctx, args.element, kind="root")
    _emit(args, doc)
    if cert.decision:
        _note("y = " + json.dumps(doc["roots"][0]["y"]))
    if args.verify and _self_verify(args, doc, ctx):
        return EXIT_ERROR
    return EXIT_OK if cert.decision else EXIT_NEGATIVE


def cmd_oracle(args) -> int:
    from .oracle import compare_all
    ctx = _context(args)
    if not ctx.finite:
        _note("error: the oracle needs a group over GF(p)")
        return EXIT_ERROR
    if args.kmax < 1:
        _note("error: --kmax must be positive")
        return EXIT_ERROR
    report = compare_all(ctx, range(1, args.kmax + 1), args.series)
    doc = comparison_to_dict(report, ctx, args.kmax, args.series)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dumps(doc))
    sys.stdout.write(comparison_table(report, csv=args.csv))
    _note(f"{report.compared} comparisons, {len(report.mismatches)} mismatches")
    if args.verify and _self_verify(args, doc, ctx):
        return EXIT_ERROR
    return EXIT_OK if report.ok else EXIT_NEGATIVE


def cmd_regular(args) -> int:
    from .roots import pk_regularity
    ctx = _context(args)
    x = parse_element(ctx, args.element)
    report = pk_regularity(ctx, x, args.k, args.series)
    doc = regularity_to_dict(report, ctx, args.element, args.series)
    _emit(args, doc)
    _note(("regular" if report.regular else "not regular") + "; gcds: " + ", ".join(doc["gcds"]))
    if args.verify and _self_verify(args, doc, ctx):
        return EXIT_ERROR
    return EXIT_OK if report.regular else EXIT_NEGATIVE


def cmd_verify(args) -> int:
    from .verify import verify_certificate
    spec = load_spec(args.spec)
    try:
        with open(args.certificate, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        _note(f"error: cannot read certificate: {exc}")
        return EXIT_ERROR
    res = verify_certificate(doc, spec)
    for line in res.lines():
        print(line)
    print("verified" if res.ok else "REJECTED")
    return EXIT_OK if res.ok else (EXIT_ERROR if res.unverifiable else EXIT_NEGATIVE)


COMMANDS = {"analyze": cmd_analyze, "root": cmd_root, "oracle": cmd_oracle,
            "regular": cmd_regular, "verify": cmd_verify}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except PowerRootsError as exc:
        _note(f"error: {exc}")
        return EXIT_ERROR
    except (ValueError, TypeError) as exc:
        _note(f"error: {exc}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
