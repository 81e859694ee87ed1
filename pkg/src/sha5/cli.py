"""Command line: step0, build-db, analyze, stats, local-only.

Exit status 0 = ok, 1 = some curve records are incomplete, 2 = error.
"""
from __future__ import annotations

import argparse
import logging
import sys

from . import pipeline as pl
from .descent import SearchPolicy

EXIT_OK, EXIT_INCOMPLETE, EXIT_ERROR = 0, 1, 2


def _cmd_step0(args) -> int:
    text = pl.step0_tables(args.max_prime)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    return EXIT_OK


def _cmd_build_db(args) -> int:
    params = pl.curve_parameters(args.max_height, args.max_conductor)
    print(f"{len(params)} curves with max(u,v) <= {args.max_height}"
          + (f" and conductor <= {args.max_conductor}" if args.max_conductor else ""))
    if args.census_only:
        return EXIT_OK
    ingested = pl.read_generators(args.generators) if args.generators else None
    policy = SearchPolicy(max_height=args.search_height)
    records = pl.build_database(params, policy, ingested, args.workers)
    pl.write_database(records, args.out)
    if args.generators_out:
        pl.write_generators(records, args.generators_out)
    bad = [r for r in records if not r.complete]
    for r in bad:
        print(f"incomplete: {r.u} {r.v} (rank {r.rank})", file=sys.stderr)
    print(f"wrote {len(records)} records to {args.out}")
    return EXIT_INCOMPLETE if bad else EXIT_OK


def _cmd_analyze(args) -> int:
    recs = pl.read_database(args.db)
    recs2 = pl.read_database(args.db2) if args.db2 else None
    allrecs = recs + [r for r in (recs2 or []) if (r.u, r.v) not in {(x.u, x.v) for x in recs}]
    n = pl.write_results(allrecs, pl.analyze_pairs(recs, recs2), args.out)
    bad = [r for r in allrecs if not r.complete]
    for r in bad:
        print(f"skipped incomplete record {r.u} {r.v}", file=sys.stderr)
    print(f"wrote {n} pair results to {args.out}")
    return EXIT_INCOMPLETE if bad else EXIT_OK


def _cmd_stats(args) -> int:
    rep = pl.stats_from_results(args.results)
    sys.stdout.write(rep.table(args.table, args.max_conductor))
    return EXIT_OK


def _cmd_local_only(args) -> int:
    tab = pl.local_only(args.max_height, args.max_conductor)
    sys.stdout.write(tab.render())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sha5", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("step0", help="prime ideal generators of Q(zeta_5) up to M")
    s.add_argument("--max-prime", type=int, required=True)
    s.add_argument("--out", default="-")
    s.set_defaults(func=_cmd_step0)

    s = sub.add_parser("build-db", help="per-curve descent records")
    s.add_argument("--max-height", type=int, required=True)
    s.add_argument("--max-conductor", type=int)
    s.add_argument("--generators", help="ingest 'u v rank x1 y1 ...' lines")
    s.add_argument("--generators-out", help="also write the generators found")
    s.add_argument("--search-height", type=int, default=SearchPolicy().max_height)
    s.add_argument("--workers", type=int, help=f"process count (default ${pl.WORKERS_ENV} or 1)")
    s.add_argument("--census-only", action="store_true", help="only count the curves")
    s.add_argument("--out", default="curves.db")
    s.set_defaults(func=_cmd_build_db)

    s = sub.add_parser("analyze", help="pair analysis over one or two databases")
    s.add_argument("--db", required=True)
    s.add_argument("--db2")
    s.add_argument("--out", default="results.txt")
    s.set_defaults(func=_cmd_analyze)

    s = sub.add_parser("stats", help="tables from a results file")
    s.add_argument("--results", required=True)
    s.add_argument("--table", required=True, choices=["1", "2", "3", "4", "5", "6", "crosstabs"])
    s.add_argument("--max-conductor", type=int, default=pl.DEFAULT_CONDUCTOR)
    s.set_defaults(func=_cmd_stats)

    s = sub.add_parser("local-only", help="T/U parity cross-tab from reduction data alone")
    s.add_argument("--max-height", type=int, required=True)
    s.add_argument("--max-conductor", type=int)
    s.set_defaults(func=_cmd_local_only)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (pl.FormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
