"""Command-line front end.

Exit codes: 0 success, 1 an identity check failed, 2 usage, parse or
session error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from typing import List, Optional

from . import __version__
from .deformation import d1_superbracket_general, star_multiply
from .dirac import dirac_branches, dirac_superbracket, reduce_mod_constraints
from .brackets import poisson_superbracket
from .errors import DiracError, SuperAlgebraError
from .exprio import format_canonical, format_series, to_machine_encoding
from .harness import SUITES, run_suites
from .session import default_session, load_session_file

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return value


def _natural(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be a natural number")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--session", help="YAML session file (default: built-in desk session)")
    common.add_argument("--format", choices=("text", "machine"), default="text")
    common.add_argument("--order", type=_natural, help="hbar truncation order (overrides the session)")

    parser = _Parser(prog="superbracket", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, help_text in (
        ("bracket", "canonical Poisson superbracket {f, g}"),
        ("dirac", "Dirac superbracket over the session constraints"),
        ("star", "star product f * g as an hbar series"),
        ("d1", "antisymmetrised first-order star bracket"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("f")
        p.add_argument("g")

    p = sub.add_parser("reduce", parents=[common], help="normal form modulo the session constraints")
    p.add_argument("f")

    p = sub.add_parser("check", parents=[common], help="run a seeded verification suite")
    p.add_argument("suite", choices=SUITES + ("all",))
    p.add_argument("--cases", type=_natural, default=100)
    p.add_argument("--seed", type=_u64, default=42)
    p.add_argument(
        "--dirac-branch",
        choices=("split", "single"),
        default="split",
        help="Dirac bracket variant for the Dirac suites",
    )
    return parser


def _emit(args, obj, text: str):
    if args.format == "machine":
        print(to_machine_encoding(obj), end="")
    else:
        print(text)


def _emit_poly(args, poly):
    _emit(args, poly, format_canonical(poly))


def _run(args) -> int:
    session = load_session_file(args.session) if args.session else default_session()
    order = session.order if args.order is None else args.order

    if args.command == "check":
        if args.order is not None:
            session = replace(session, order=order)
        reports = run_suites(session, args.suite, args.cases, args.seed, dirac_branch=args.dirac_branch)
        for r in reports:
            _emit(args, r, r.text())
        return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL

    f = session.parse(args.f)
    if args.command == "reduce":
        _emit_poly(args, reduce_mod_constraints(f, session.constraint_polys))
        return EXIT_OK

    g = session.parse(args.g)
    if args.command == "bracket":
        _emit_poly(args, poisson_superbracket(f, g, session.bracket))
    elif args.command == "dirac":
        ctx = session.dirac
        result = dirac_superbracket(f, g, ctx)
        _emit_poly(args, result)
        if args.format == "text":
            for pf, pg, branch in dirac_branches(f, g):
                print(f"branch ({pf}, {pg}): {branch}")
    elif args.command == "star":
        series = star_multiply(f, g, session.star(order))
        if args.format == "machine":
            print(to_machine_encoding(series), end="")
        else:
            print(format_series(series))
            for k, c in enumerate(series.coeffs):
                print(f"  hbar^{k}: {format_canonical(c)}")
    elif args.command == "d1":
        _emit_poly(args, d1_superbracket_general(f, g, session.star(max(1, order))))
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except DiracError as exc:
        print(f"error: constraint matrix: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SuperAlgebraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
