"""Command-line front end: `verify`, `dump` and `check`."""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import __version__
from .checks import GROUPS, Options, matches, run_group, select
from .errors import UnknownName
from .report import Report, fingerprint_of

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 2 with a message on stderr
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def convention_fingerprint() -> str:
    from .clifford import standard_model
    model = standard_model()
    return fingerprint_of([g.to_text() for g in model.gammas] + [model.C.to_text()])


def _window(text: str) -> tuple:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("window is LO:HI")
    if lo > hi or lo < 0:
        raise argparse.ArgumentTypeError("window needs 0 <= LO <= HI")
    return lo, hi


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer")
    if v < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="superfda", description="Exact verification of super L-infinity algebra identities.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    v = sub.add_parser("verify", help="run verification checks")
    v.add_argument("selector", nargs="?", default="all", help="`all`, a check id or a dotted prefix")
    v.add_argument("--report", choices=("text", "json"), default="text")
    v.add_argument("--threads", type=_positive, default=1)
    v.add_argument("--max-degree", type=_positive, default=12, help="degree cap for exponential elements")
    v.add_argument("--window", type=_window, default=None, help="KU window LO:HI for the family morphisms")
    v.add_argument("--no-blocks", action="store_true", help="skip the block-by-block Fierz run")
    v.add_argument("--list", action="store_true", help="list the check ids that would run")

    d = sub.add_parser("dump", help="print a built-in algebra, family or the gamma matrices")
    d.add_argument("name", nargs="?")
    d.add_argument("--gammas", action="store_true")

    c = sub.add_parser("check", help="parse and check an .fda file (`-` for stdin)")
    c.add_argument("file")
    c.add_argument("--report", choices=("text", "json"), default="text")
    return p


def _emit(report: Report, fmt: str, out) -> None:
    out.write((report.to_json() if fmt == "json" else report.to_text()) + "\n")


def cmd_verify(args, out) -> int:
    groups = select(args.selector)
    if not groups:
        print(f"superfda: error: no check matches {args.selector!r}", file=sys.stderr)
        return EXIT_USAGE
    if args.list:
        for g in groups:
            for i in g.ids:
                if matches(i, args.selector) or args.selector == g.name:
                    out.write(i + "\n")
        return EXIT_OK
    opts = Options(threads=args.threads, max_degree=args.max_degree, window=args.window, blocks=not args.no_blocks)
    entries = []
    if args.threads > 1 and len(groups) > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(args.threads) as ex:
            for es in ex.map(lambda g: run_group(g, opts), groups):
                entries += es
    else:
        for g in groups:
            entries += run_group(g, opts)
    entries = [e for e in entries if matches(e.id, args.selector) or e.id.endswith(".error")]
    report = Report(__version__, convention_fingerprint(), entries)
    _emit(report, args.report, out)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_dump(args, out) -> int:
    from . import registry
    from .fda_format import serialize
    if args.gammas:
        from .clifford import standard_model
        model = standard_model()
        for a, g in enumerate(model.gammas):
            out.write(f"# Gamma_{a}\n{g.to_text()}\n")
        out.write(f"# C\n{model.C.to_text()}\n")
        return EXIT_OK
    if not args.name:
        print("superfda: error: dump needs a name or --gammas", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.name in registry.FAMILY_NAMES:
            out.write(registry.family_bundle(args.name))
            return EXIT_OK
        alg = registry.algebra(args.name)
    except UnknownName as exc:
        print(f"superfda: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out.write(serialize(alg, _ident(args.name), pretty=True) + "\n")
    return EXIT_OK


def _ident(label: str) -> str:
    from .fda_format import ident
    return ident(label)


def cmd_check(args, out) -> int:
    from . import registry
    from .fda_format import check_document, parse_with_diagnostics
    from .report import ReportEntry
    try:
        text = sys.stdin.read() if args.file == "-" else open(args.file, encoding="utf-8").read()
    except (OSError, UnicodeDecodeError) as exc:
        print(f"superfda: error: cannot read {args.file}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    doc, diags = parse_with_diagnostics(text, registry.lookup)
    if doc is None:
        for dg in diags:
            print(f"{args.file}:{dg}", file=sys.stderr)
        entries = [ReportEntry("parse", "fail", str(dg), dg.lexeme or "value reported") for dg in diags[:1]]
        _emit(Report(__version__, convention_fingerprint(), entries), args.report, out)
        return EXIT_FAIL
    entries = [ReportEntry("parse", "pass", f"{len(doc.order)} blocks")] + check_document(doc)
    report = Report(__version__, convention_fingerprint(), entries)
    _emit(report, args.report, out)
    return EXIT_OK if report.ok else EXIT_FAIL


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    return {"verify": cmd_verify, "dump": cmd_dump, "check": cmd_check}[args.command](args, out)


def entry_point() -> None:
    try:
        code = main()
        sys.stdout.flush()
    except BrokenPipeError:  # e.g. piped into head
        import os
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        code = EXIT_OK
    raise SystemExit(code)


if __name__ == "__main__":
    entry_point()
