"""Command-line interface.

Exit codes: 0 success (or "avoids"), 1 "contains" / failed self-check,
2 usage or parse error, 3 resource cap exceeded.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import re
import sys
import time
from typing import Sequence, TextIO

from . import __version__
from .core import Pattern, ResourceLimitError, contains_pattern, keyed
from .generators import (STACK_TARGETS, gen_layered_runs, gen_rejection,
                         gen_stack_family, inject_duplicates)
from .matrix import count_avoiders, count_T
from .sorter import SortReport, SorterConfig, sort_pattern_avoiding
from .treesort import DEFAULT_TREE_BUDGET, count_trees_exact

SCHEMA_VERSION = 1
BENCH_COLUMNS = ["family", "n", "rep", "seed", "comparisons", "comparisons_per_n",
                 "k", "phases", "rounds", "tree_advances", "fallback_blocks", "time_ms"]

EXIT_OK, EXIT_CONTAINS, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3

_TOKEN = re.compile(r"\S+")
_INT = re.compile(r"[+-]?[0-9]+")


class InputError(ValueError):
    pass


def parse_integers(text: str) -> list[int]:
    """Whitespace-separated ASCII integers; errors name line and column."""
    values = []
    for lineno, line in enumerate(text.splitlines(), 1):
        for m in _TOKEN.finditer(line):
            tok = m.group()
            if not _INT.fullmatch(tok):
                raise InputError(f"line {lineno}, column {m.start() + 1}: malformed integer {tok!r}")
            values.append(int(tok))
    return values


def _read(path: str | None) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    with open(path, encoding="ascii") as fh:
        return fh.read()


def _default_seed() -> int:
    raw = os.environ.get("PATSORT_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"PATSORT_SEED must be an integer, got {raw!r}") from None


def stats_document(report: SortReport, argv: Sequence[str], wall_ms: float,
                   pattern: str | None = None) -> dict:
    blocks = report.block_stats
    final = report.final_merge
    return {
        "schema_version": SCHEMA_VERSION,
        "command": list(argv),
        "n": report.n,
        "k": report.k,
        "pattern": pattern,
        "direct": report.direct,
        "layers": [
            {"tuple_size": layer.tuple_size, "runs_in": layer.runs_in, "runs_out": layer.runs_out,
             "groups_merged": layer.groups_merged, "comparisons": layer.comparisons,
             "max_phases": layer.max_phases, "rounds": layer.rounds}
            for layer in report.layers
        ],
        "phases": [
            {"d": ph.d, "m_i": ph.m, "rounds": len(ph.rounds)} for ph in (final.phases if final else [])
        ],
        "comparisons": report.comparisons,
        "tree_advances": blocks.tree_advances if blocks else 0,
        "fallback_blocks": blocks.fallback_blocks if blocks else 0,
        "wall_time_ms": round(wall_ms, 3),
    }


def cmd_sort(args, argv, out: TextIO) -> int:
    values = parse_integers(_read(args.input))
    cfg = SorterConfig(k_override=args.k, tree_budget=args.budget)
    start = time.perf_counter()
    result, report = sort_pattern_avoiding(values, cfg)
    wall_ms = (time.perf_counter() - start) * 1000
    if args.seeded_check:
        reference = [key.value for key in sorted(keyed(values))]
        if result != reference:
            print("patsort: self-check failed: output differs from reference sort", file=sys.stderr)
            return EXIT_CONTAINS
    out.write("".join(f"{v}\n" for v in result))
    if args.stats:
        with open(args.stats, "w", encoding="ascii") as fh:
            json.dump(stats_document(report, argv, wall_ms), fh, indent=2, sort_keys=True)
            fh.write("\n")
    return EXIT_OK


def cmd_check(args, argv, out: TextIO) -> int:
    pattern = Pattern.parse(args.pattern)
    values = parse_integers(_read(args.file))
    found = contains_pattern(values, pattern)
    out.write("contains\n" if found else "avoids\n")
    return EXIT_CONTAINS if found else EXIT_OK


def _generate(family: str, n: int, seed: int, t: int | None, target: int | None,
              pattern: str | None, duplicates: int | None) -> list[int]:
    if family == "stack":
        perm = gen_stack_family(n, target if target is not None else 231, seed)
    elif family == "layered":
        if t is None:
            raise InputError("--family layered needs --t")
        perm = gen_layered_runs(n, t, seed)
    elif family == "rejection":
        if pattern is None:
            raise InputError("--family rejection needs --pattern")
        perm = gen_rejection(Pattern.parse(pattern), n, seed)
    else:  # pragma: no cover - argparse restricts choices
        raise InputError(f"unknown family {family!r}")
    values = list(perm)
    if duplicates is not None:
        values = inject_duplicates(values, duplicates, seed)
    return values


def cmd_gen(args, argv, out: TextIO) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    values = _generate(args.family, args.n, seed, args.t, args.target, args.pattern, args.duplicates)
    out.write("".join(f"{v}\n" for v in values))
    return EXIT_OK


def cmd_count(args, argv, out: TextIO) -> int:
    if args.what == "avoiders":
        if args.pattern is None or args.n is None:
            raise InputError("avoiders needs --pattern and --n")
        value = count_avoiders(Pattern.parse(args.pattern), args.n)
    elif args.what == "matrices":
        if args.pattern is None or args.n is None or args.m is None:
            raise InputError("matrices needs --pattern, --m and --n")
        value = count_T(Pattern.parse(args.pattern), args.m, args.n)
    else:
        if args.k is None or args.h is None:
            raise InputError("trees needs --k and --h")
        value = count_trees_exact(args.k, args.h)
    out.write(f"{value}\n")
    return EXIT_OK


def _parse_sizes(text: str) -> list[int]:
    try:
        sizes = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"invalid --sizes {text!r}") from None
    if not sizes or any(s < 1 for s in sizes):
        raise InputError("--sizes needs positive integers")
    if sizes != sorted(sizes):
        raise InputError("--sizes must be ascending")
    return sizes


def bench_rows(family: str, sizes: Sequence[int], reps: int, seed: int, t: int | None = None,
               target: int | None = None, pattern: str | None = None,
               duplicates: int | None = None, cfg: SorterConfig | None = None) -> list[dict]:
    rows = []
    for n in sizes:
        for rep in range(reps):
            rep_seed = (seed + 1_000_003 * rep + n) % 2**64
            values = _generate(family, n, rep_seed, t, target, pattern, duplicates)
            start = time.perf_counter()
            _, report = sort_pattern_avoiding(values, cfg)
            elapsed = (time.perf_counter() - start) * 1000
            final = report.final_merge
            rows.append({
                "family": family,
                "n": n,
                "rep": rep,
                "seed": rep_seed,
                "comparisons": report.comparisons,
                "comparisons_per_n": f"{report.comparisons / n:.6f}",
                "k": report.k if report.k is not None else 0,
                "phases": final.phase_count if final else 0,
                "rounds": final.rounds_total if final else 0,
                "tree_advances": report.block_stats.tree_advances if report.block_stats else 0,
                "fallback_blocks": report.block_stats.fallback_blocks if report.block_stats else 0,
                "time_ms": f"{elapsed:.3f}",
            })
    return rows


def cmd_bench(args, argv, out: TextIO) -> int:
    sizes = _parse_sizes(args.sizes)
    seed = args.seed if args.seed is not None else _default_seed()
    rows = bench_rows(args.family, sizes, args.reps, seed, args.t, args.target,
                      args.pattern, args.duplicates)
    if args.out and args.out != "-":
        with open(args.out, "w", newline="", encoding="ascii") as fh:
            _write_csv(fh, rows)
    else:
        _write_csv(out, rows)
    return EXIT_OK


def _write_csv(fh: TextIO, rows: list[dict]) -> None:
    writer = csv.DictWriter(fh, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 2 like argparse, but without SystemExit leaking into tests
        self.print_usage(sys.stderr)
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="patsort", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"patsort {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sort", help="sort integers read from a file or stdin")
    p.add_argument("input", nargs="?", help="input file (default: stdin)")
    p.add_argument("--stats", metavar="PATH", help="write a JSON stats document")
    p.add_argument("--k", type=int, help="block length override")
    p.add_argument("--budget", type=int, default=DEFAULT_TREE_BUDGET,
                   help="max decision-tree advances before falling back (default: %(default)s)")
    p.add_argument("--seeded-check", action="store_true",
                   help="verify the output against a reference stable sort")
    p.set_defaults(func=cmd_sort)

    p = sub.add_parser("check", help="test a sequence for a pattern occurrence")
    p.add_argument("file", help="sequence file ('-' for stdin)")
    p.add_argument("--pattern", required=True, help="comma-separated permutation, e.g. 2,3,1")
    p.set_defaults(func=cmd_check)

    def add_family_flags(p):
        p.add_argument("--family", required=True, choices=["stack", "layered", "rejection"])
        p.add_argument("--t", type=int, help="number of increasing runs (layered)")
        p.add_argument("--target", type=int, choices=sorted(STACK_TARGETS),
                       help="avoided length-3 pattern (stack, default 231)")
        p.add_argument("--pattern", help="avoided pattern (rejection)")
        p.add_argument("--duplicates", type=int, metavar="LEVELS",
                       help="collapse values onto at most LEVELS distinct values")
        p.add_argument("--seed", type=int, help="seed (default: $PATSORT_SEED or 0)")

    p = sub.add_parser("gen", help="generate a pattern-avoiding instance")
    add_family_flags(p)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("count", help="exact brute-force counts")
    p.add_argument("--what", required=True, choices=["avoiders", "matrices", "trees"])
    p.add_argument("--pattern")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--h", type=int)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("bench", help="comparison counts and timings as CSV")
    add_family_flags(p)
    p.add_argument("--sizes", required=True, help="ascending comma-separated sizes")
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, argv, out)
    except ResourceLimitError as exc:
        print(f"patsort: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InputError, ValueError) as exc:
        print(f"patsort: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"patsort: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
