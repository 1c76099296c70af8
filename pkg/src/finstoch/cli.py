"""Command-line front end: urn distributions and the law suite.

Exit codes: 0 on success (and when all laws pass), 1 when a law check
fails, 2 for usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import draws, multisets, split
from .algebra import mzip_kernel
from .core import Dist, Tagged, coproduct_finset, make_finset, state_kernel
from .laws import GridSpec, law_registry, run_laws
from .multisets import Multiset
from .textio import FormatError, dist_to_json, parse_dist, parse_urn, render_dist_lines


class UsageError(Exception):
    pass


def _emit_dist(d: Dist, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(dist_to_json(d)))
    else:
        for line in render_dist_lines(d):
            print(line)


def _urn_row(kernel, urn: Multiset, K: int) -> Dist:
    space = multisets.multiset_space(urn.base, K)
    return kernel.rows[space.index(urn)]


def cmd_multinomial(args) -> int:
    d = parse_dist(args.dist)
    mn = draws.multinomial_kernel(state_kernel(d), args.k)
    _emit_dist(mn.rows[0], args.format)
    return 0


def cmd_hypergeometric(args) -> int:
    urn = parse_urn(args.urn)
    if args.draws > urn.size:
        raise UsageError(f"cannot draw {args.draws} from an urn of size {urn.size}")
    hg = draws.hypergeometric_kernel(urn.base, urn.size, args.draws)
    _emit_dist(_urn_row(hg, urn, urn.size), args.format)
    return 0


def cmd_dd(args) -> int:
    urn = parse_urn(args.urn)
    if urn.size < 1:
        raise UsageError("draw-and-delete needs a nonempty urn")
    dd = multisets.dd_kernel(urn.base, urn.size - 1)
    _emit_dist(_urn_row(dd, urn, urn.size), args.format)
    return 0


def cmd_flrn(args) -> int:
    urn = parse_urn(args.urn)
    if urn.size < 1:
        raise UsageError("frequentist learning needs a nonempty urn")
    flrn = multisets.flrn_kernel(urn.base, urn.size)
    _emit_dist(_urn_row(flrn, urn, urn.size), args.format)
    return 0


def cmd_arr(args) -> int:
    urn = parse_urn(args.urn)
    arr = multisets.arr_kernel(urn.base, urn.size)
    _emit_dist(_urn_row(arr, urn, urn.size), args.format)
    return 0


def cmd_mzip(args) -> int:
    left = parse_urn(args.left)
    right = parse_urn(args.right)
    if left.size != right.size:
        raise UsageError("mzip needs two urns of the same size")
    K = left.size
    mz = mzip_kernel(left.base, right.base, K)
    row = mz.row((left, right))
    _emit_dist(row, args.format)
    return 0


def cmd_msplit(args) -> int:
    urn = parse_urn(args.urn)
    left_labels = [lab.strip() for lab in args.left.split(",") if lab.strip()]
    base_labels = list(urn.base)
    unknown = [lab for lab in left_labels if lab not in urn.base.index]
    if unknown:
        raise UsageError(f"--left labels not in the urn: {', '.join(unknown)}")
    X = make_finset([lab for lab in base_labels if lab in set(left_labels)])
    Y = make_finset([lab for lab in base_labels if lab not in set(left_labels)])
    XY = coproduct_finset((X, Y))
    tagged_counts = {Tagged(0, x): urn.count(x) for x in X}
    tagged_counts.update({Tagged(1, y): urn.count(y) for y in Y})
    tagged_urn = Multiset(XY, tuple(tagged_counts[lab] for lab in XY))
    ms = split.msplit_kernel(X, Y, urn.size)
    _emit_dist(_urn_row(ms, tagged_urn, urn.size), args.format)
    return 0


def cmd_laws(args) -> int:
    grid = GridSpec()
    if args.max_set is not None:
        if args.max_set < 1:
            raise UsageError("--max-set must be at least 1")
        grid = GridSpec(
            x_sizes=tuple(s for s in grid.x_sizes if s <= args.max_set),
            y_sizes=tuple(s for s in grid.y_sizes if s <= args.max_set),
        )
    if args.max_k is not None:
        if args.max_k < 1:
            raise UsageError("--max-k must be at least 1")
        grid = GridSpec(
            x_sizes=grid.x_sizes,
            y_sizes=grid.y_sizes,
            k_values=tuple(k for k in grid.k_values if k <= args.max_k),
        )
    selection = args.law if args.law else None
    if selection is not None:
        known = {law.id for law in law_registry()}
        for law_id in selection:
            if law_id not in known:
                raise UsageError(f"unknown law id {law_id!r}")
    report = run_laws(grid=grid, selection=selection, jobs=args.jobs)
    if args.json:
        print(json.dumps(report.to_json()))
    else:
        print(report.table())
    return 0 if report.total_failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finstoch",
        description="Exact urn distributions and the equational law suite.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("multinomial", help="draws with replacement from a distribution")
    p.add_argument("--dist", required=True, help="distribution, e.g. 'h:1/2,t:1/2'")
    p.add_argument("--k", type=int, required=True, help="number of draws")
    add_format(p)
    p.set_defaults(fn=cmd_multinomial)

    p = sub.add_parser("hypergeometric", help="draws without replacement from an urn")
    p.add_argument("--urn", required=True, help="urn, e.g. 'a:2,b:1'")
    p.add_argument("--draws", type=int, required=True)
    add_format(p)
    p.set_defaults(fn=cmd_hypergeometric)

    p = sub.add_parser("dd", help="one uniform draw-and-delete step")
    p.add_argument("--urn", required=True)
    add_format(p)
    p.set_defaults(fn=cmd_dd)

    p = sub.add_parser("flrn", help="normalise an urn to a distribution")
    p.add_argument("--urn", required=True)
    add_format(p)
    p.set_defaults(fn=cmd_flrn)

    p = sub.add_parser("arr", help="uniform arrangements of an urn into a sequence")
    p.add_argument("--urn", required=True)
    add_format(p)
    p.set_defaults(fn=cmd_arr)

    p = sub.add_parser("mzip", help="multizip of two equal-size urns")
    p.add_argument("--left", required=True, help="first urn")
    p.add_argument("--right", required=True, help="second urn")
    add_format(p)
    p.set_defaults(fn=cmd_mzip)

    p = sub.add_parser("msplit", help="split an urn over a two-part alphabet")
    p.add_argument("--urn", required=True)
    p.add_argument("--left", required=True, help="comma-separated labels of the left part")
    add_format(p)
    p.set_defaults(fn=cmd_msplit)

    p = sub.add_parser("laws", help="run the law suite on the instance grid")
    p.add_argument("--max-set", type=int, default=None, help="cap carrier sizes")
    p.add_argument("--max-k", type=int, default=None, help="cap multiset sizes")
    p.add_argument("--law", action="append", default=None, help="law id to run (repeatable)")
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.set_defaults(fn=cmd_laws)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalise other codes
        return 2 if exc.code not in (0,) else 0
    try:
        return args.fn(args)
    except (FormatError, UsageError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
