"""
Command line interface.

    inccad ccd FILE [--eqs] [--json | --text] [--history]
    inccad cad FILE [--json | --text]
    inccad check FILE [--samples N] [--seed S]
    inccad bench DIR [--repeat K] [--no-cad] [--out FILE]

Exit codes: 0 success, 1 usage or parse error, 2 a check failed,
3 internal error.  ``CCD_SEED`` overrides ``--seed``.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
import traceback
from pathlib import Path

from . import __version__, bench, ccd, checks
from .parsing import ParseError, read_system
from .realcad import make_semi_algebraic, render_cad
from .tree import render_tree, tree_to_json

EXIT_OK, EXIT_USAGE, EXIT_CHECK, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="inccad", description="Incremental cylindrical decomposition and real CAD.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def fmt(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--json", dest="fmt", action="store_const", const="json")
        g.add_argument("--text", dest="fmt", action="store_const", const="text")
        p.set_defaults(fmt="text")

    p = sub.add_parser("ccd", help="complex cylindrical tree of a system file")
    p.add_argument("file")
    p.add_argument("--eqs", action="store_true", help="keep only branches where the constraints hold")
    p.add_argument("--history", action="store_true", help="include replaced (PAST) nodes in JSON")
    fmt(p)

    p = sub.add_parser("cad", help="real CAD of a system file")
    p.add_argument("file")
    fmt(p)

    p = sub.add_parser("check", help="run the sampling property checks")
    p.add_argument("file")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("bench", help="time every *.sys file of a directory (CSV)")
    p.add_argument("dir")
    p.add_argument("--repeat", type=int, default=1)
    p.add_argument("--no-cad", action="store_true", help="skip the real CAD phase")
    p.add_argument("--out", help="write the CSV here instead of stdout")
    return ap


def _cmd_ccd(args, out) -> int:
    system = read_system(args.file)
    if args.eqs:
        if system.is_plain:
            raise UsageError("--eqs needs a file of '= 0' / '<> 0' constraints")
        tree = ccd.solve_system(system)
        shown = [p for p, _ in system.items if not p.is_constant]
    else:
        shown = [p for p in system.polys if not p.is_constant]
        if not shown:
            raise UsageError("no non-constant polynomial to decompose")
        tree = ccd.cylindrical_decompose(shown, system.order)
    if args.fmt == "json":
        json.dump(tree_to_json(tree, history=args.history), out, indent=2)
        out.write("\n")
    else:
        out.write(render_tree(tree, shown) + "\n")
    return EXIT_OK


def _cmd_cad(args, out) -> int:
    system = read_system(args.file)
    polys = [p for p in system.polys if not p.is_constant]
    if not polys:
        raise UsageError("no non-constant polynomial to decompose")
    tree = ccd.cylindrical_decompose(polys, system.order)
    c = make_semi_algebraic(tree, polys)
    if args.fmt == "json":
        json.dump(c.to_json(), out, indent=2)
        out.write("\n")
    else:
        out.write(render_cad(c) + "\n")
    return EXIT_OK


def _cmd_check(args, out) -> int:
    system = read_system(args.file)
    seed = int(os.environ["CCD_SEED"]) if os.environ.get("CCD_SEED") else args.seed
    results = checks.run_all(system, random.Random(seed), samples=args.samples)
    for r in results:
        out.write(r.line() + "\n")
    return EXIT_OK if all(r.ok for r in results) else EXIT_CHECK


def _cmd_bench(args, out) -> int:
    d = Path(args.dir)
    if not d.is_dir():
        raise UsageError(f"not a directory: {d}")
    text = bench.to_csv(bench.run_dir(d, repeat=args.repeat, with_cad=not args.no_cad))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return EXIT_OK


COMMANDS = {"ccd": _cmd_ccd, "cad": _cmd_cad, "check": _cmd_check, "bench": _cmd_bench}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(f"inccad: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:  # --help / --version
        return int(e.code or 0)
    if args.verbose:
        logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.cmd](args, out)
    except (UsageError, ParseError) as e:
        print(f"inccad: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"inccad: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:  # noqa: BLE001
        print(f"inccad: internal error: {e}", file=sys.stderr)
        traceback.print_exc(file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
