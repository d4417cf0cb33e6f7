"""Command-line front end.

Exit status: 0 on success, 1 on a domain error (bad arguments included),
2 when ``verify`` reports a failing check.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import __version__
from .compositions import count, enumerate_compositions, fibonacci, parse_composition
from .errors import BudgetError, DomainError
from .poset import hasse, maximal_elements, meet, meet_recursive
from .topology import (
    alt_component_count,
    cell_dimension,
    component_count_direct,
    component_count_recurrence,
    component_series_coeffs,
    poincare_by_recurrence,
    poincare_closed_form,
    poincare_from_cells,
)
from .verify import Budgets, format_report, verify_all

MAX_N = 64
DEFAULT_MAX_NODES = 10**6


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise DomainError(message)


def _n(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 1 <= n <= MAX_N:
        raise argparse.ArgumentTypeError(f"n must be in 1..{MAX_N}, got {n}")
    return n


def _check_enumerable(n: int, max_nodes: int) -> None:
    if count(n) > max_nodes:
        raise BudgetError(f"F_{n} has {count(n)} elements, above --max-nodes {max_nodes}")


def cmd_enumerate(args) -> str:
    if args.n == 0 and not args.allow_empty:
        raise DomainError("n = 0 needs --allow-empty")
    if args.n:
        _check_enumerable(args.n, args.max_nodes)
    comps = enumerate_compositions(args.n, allow_empty=args.allow_empty)
    if args.format == "json":
        return json.dumps([list(g.parts) for g in comps]) + "\n"
    return "".join(f"{g}\n" for g in comps)


def cmd_hasse(args) -> str:
    _check_enumerable(args.n, args.max_nodes)
    d = hasse(args.n)
    if args.format == "json":
        return d.to_json() + "\n"
    if args.format == "dot":
        return d.to_dot()
    return d.to_text()


_POINCARE = {
    "closed": poincare_closed_form,
    "cells": poincare_from_cells,
    "recurrence": poincare_by_recurrence,
}


def cmd_poincare(args) -> str:
    if args.method == "cells":
        _check_enumerable(args.n, args.max_nodes)
    p = _POINCARE[args.method](args.n)
    if args.format == "json":
        return p.to_json(args.n) + "\n"
    return f"{p}\n"


def cmd_components(args) -> str:
    n = args.n
    recurrence = component_count_recurrence(n)
    enumerable = count(n) <= args.max_nodes
    maxima = maximal_elements(n) if enumerable else None
    if args.format == "json":
        obj = {"n": n, "recurrence": recurrence}
        if maxima is not None:
            obj["count"] = len(maxima)
            obj["maximal"] = [list(g.parts) for g in maxima]
            obj["dimensions"] = [cell_dimension(g) for g in maxima]
        return json.dumps(obj) + "\n"
    lines = [f"n = {n}", f"a_n (recurrence) = {recurrence}"]
    if maxima is None:
        lines.append(f"maximal elements not listed: |F_n| exceeds --max-nodes {args.max_nodes}")
    else:
        lines.append(f"maximal elements = {len(maxima)}")
        for g in maxima:
            lines.append(f"  {g}  dim {cell_dimension(g)}")
    return "\n".join(lines) + "\n"


def cmd_meet(args) -> str:
    a, b = parse_composition(args.a), parse_composition(args.b)
    for g in (a, b):
        if g.n != args.n:
            raise DomainError(f"{g} is a composition of {g.n}, not {args.n}")
    m = meet_recursive(a, b) if args.method == "recursive" else meet(a, b)
    return f"{m}\n"


def cmd_verify(args) -> tuple[str, int]:
    budgets = Budgets.from_env()
    for key in ("poset", "poly", "quadric", "flag", "subspaces"):
        value = getattr(args, f"{key}_budget")
        if value is not None:
            setattr(budgets, key, value)
    results = verify_all(args.n_max, budgets)
    status = 2 if any(r.failed for r in results) else 0
    return format_report(results, timing=args.timing), status


SEQUENCE_COLUMNS = ["n", "fib", "a_direct", "a_recur", "a_gf", "a_alt", "poincare"]


def sequence_rows(lo: int, hi: int) -> list[dict]:
    gf = component_series_coeffs(hi)
    rows = []
    for n in range(lo, hi + 1):
        rows.append({
            "n": n,
            "fib": fibonacci(n),
            "a_direct": component_count_direct(n),
            "a_recur": component_count_recurrence(n),
            "a_gf": gf[n],
            "a_alt": alt_component_count(n) if n >= 3 else None,
            "poincare": poincare_from_cells(n).coeffs,
        })
    return rows


def cmd_sequences(args) -> str:
    lo, hi = args.start, args.to
    if lo > hi:
        raise DomainError(f"empty range {lo}..{hi}")
    _check_enumerable(hi, args.max_nodes)
    rows = sequence_rows(lo, hi)
    if args.format == "json":
        return json.dumps([{**r, "poincare": list(r["poincare"])} for r in rows]) + "\n"
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SEQUENCE_COLUMNS)
        for r in rows:
            w.writerow([
                r["n"], r["fib"], r["a_direct"], r["a_recur"], r["a_gf"],
                "" if r["a_alt"] is None else r["a_alt"],
                ",".join(map(str, r["poincare"])),
            ])
        return buf.getvalue()
    out = []
    for r in rows:
        alt = "-" if r["a_alt"] is None else r["a_alt"]
        out.append(
            f"n={r['n']} fib={r['fib']} a={r['a_direct']}/{r['a_recur']}/{r['a_gf']}/{alt} "
            f"P=[{','.join(map(str, r['poincare']))}]"
        )
    return "\n".join(out) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", metavar="FILE", help="write output to FILE instead of stdout")
    common.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES,
                        help="refuse to enumerate F_n with more elements than this")

    parser = _Parser(prog="fibquadrics", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("enumerate", parents=[common], help="list odd-part compositions of n")
    p.add_argument("n", type=int)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--allow-empty", action="store_true", help="accept n = 0")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("hasse", parents=[common], help="Hasse diagram of the closure order")
    p.add_argument("n", type=_n)
    p.add_argument("--format", choices=["text", "json", "dot"], default="text")
    p.set_defaults(func=cmd_hasse)

    p = sub.add_parser("poincare", parents=[common], help="Poincare polynomial of Y_n")
    p.add_argument("n", type=_n)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--method", choices=sorted(_POINCARE), default="closed")
    p.set_defaults(func=cmd_poincare)

    p = sub.add_parser("components", parents=[common], help="irreducible components of Y_n")
    p.add_argument("n", type=_n)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_components)

    p = sub.add_parser("meet", parents=[common], help="greatest common lower bound")
    p.add_argument("n", type=_n)
    p.add_argument("a", help="composition literal, e.g. 5,1")
    p.add_argument("b")
    p.add_argument("--method", choices=["downset", "recursive"], default="downset")
    p.set_defaults(func=cmd_meet)

    p = sub.add_parser("verify", parents=[common], help="run every cross-check")
    p.add_argument("--n-max", type=_n, default=12)
    p.add_argument("--timing", action="store_true", help="append wall time to each line")
    for key in ("poset", "poly", "quadric", "flag", "subspaces"):
        p.add_argument(f"--{key}-budget", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sequences", parents=[common], help="table of the counting sequences")
    p.add_argument("--from", dest="start", type=_n, default=1)
    p.add_argument("--to", type=_n, required=True)
    p.add_argument("--format", choices=["text", "csv", "json"], default="text")
    p.set_defaults(func=cmd_sequences)
    return parser


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        if args.verb == "enumerate" and not 0 <= args.n <= MAX_N:
            raise DomainError(f"n must be in 0..{MAX_N}, got {args.n}")
        result = args.func(args)
        text, status = result if isinstance(result, tuple) else (result, 0)
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            stdout.write(text)
        return status
    except DomainError as exc:
        stderr.write(f"error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
