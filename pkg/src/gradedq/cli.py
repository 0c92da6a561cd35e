"""``gq``: run, check and format verification scripts."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .dsl.runner import (EXIT_PARSE, EXIT_SEMANTIC, fmt_text, render_json, render_text,
                         run_text)
from .errors import ParseError


def _read(path: str) -> tuple[str, Path]:
    if path == "-":
        return sys.stdin.read(), Path.cwd()
    p = Path(path)
    return p.read_text(encoding="utf-8"), p.resolve().parent


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="gq", description="Exact verification of graded Q-manifold identities.")
    sub = ap.add_subparsers(dest="cmd", required=True)
    r = sub.add_parser("run", help="execute a script and report")
    r.add_argument("script")
    r.add_argument("--emit", choices=["text", "json"], default="text")
    r.add_argument("--no-timing", action="store_true", help="omit timings (byte-stable output)")
    c = sub.add_parser("check", help="parse and elaborate only")
    c.add_argument("script")
    f = sub.add_parser("fmt", help="print the canonical layout of a script")
    f.add_argument("script")
    args = ap.parse_args(argv)

    try:
        text, base = _read(args.script)
    except OSError as exc:
        print(f"gq: cannot read {args.script}: {exc.strerror}", file=sys.stderr)
        return EXIT_SEMANTIC

    if args.cmd == "fmt":
        try:
            sys.stdout.write(fmt_text(text))
        except ParseError as exc:
            print(f"{args.script}:{exc}", file=sys.stderr)
            return EXIT_PARSE
        return 0

    res = run_text(text, base, execute=(args.cmd == "run"))
    if res.error is not None:
        print(f"{args.script}:{res.error}", file=sys.stderr)
    if args.cmd == "check":
        if res.error is None:
            print(f"{args.script}: ok")
        return res.exit_code
    timing = not args.no_timing
    out = render_json(res, timing) if args.emit == "json" else render_text(res, timing)
    sys.stdout.write(out)
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
