"""Command-line entry point: ``citemet <subcommand> ...``.

Exit codes: 0 success, 1 validation or parse failure (or unknown journal),
2 usage error or unreadable input.
"""

from __future__ import annotations

import argparse
import os
import sys
import warnings
from pathlib import Path

from citemet.ingest import IngestError, IngestOptions, IngestWarning, load_dataset, resolve_format
from citemet.metrics import UnknownJournal, journal_report, researcher_report
from citemet.report import (
    JOURNAL_METRICS,
    RESEARCHER_METRICS,
    af_curve,
    af_table,
    asf_curve,
    asf_table,
    display,
    rank_journals,
    rank_researchers,
    render,
    render_ranking,
)

DATA_DIR_ENV = "CITEMET_DATA_DIR"
DATA_FILES = ("publications", "citations", "journals")
_EXTENSIONS = (".csv", ".tsv", ".jsonl")


class UsageError(Exception):
    pass


def _data_paths(args) -> list[str]:
    if args.paths:
        if len(args.paths) != 3:
            raise UsageError("expected three data files: PUBLICATIONS CITATIONS JOURNALS")
        return list(args.paths)
    data_dir = os.environ.get(DATA_DIR_ENV)
    if not data_dir:
        raise UsageError(f"no data files given and {DATA_DIR_ENV} is not set")
    paths = []
    for stem in DATA_FILES:
        found = [Path(data_dir, stem + ext) for ext in _EXTENSIONS if Path(data_dir, stem + ext).is_file()]
        if len(found) != 1:
            raise UsageError(f"expected exactly one {stem}{{{','.join(_EXTENSIONS)}}} in {data_dir}")
        paths.append(str(found[0]))
    return paths


def _check_inputs(paths, opts: IngestOptions):
    for p in paths:
        if not os.path.isfile(p) or not os.access(p, os.R_OK):
            raise UsageError(f"cannot read {p}")
        try:
            resolve_format(opts, p)
        except ValueError as exc:
            raise UsageError(str(exc)) from None


def _load(args):
    """Load the dataset, printing problems to stderr. Returns None on failure."""
    paths = _data_paths(args)
    opts = IngestOptions(format=args.input_format, strict=args.strict)
    _check_inputs(paths, opts)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IngestWarning)
        try:
            ds = load_dataset(*paths, opts=opts)
        except IngestError as exc:
            for issue in exc.issues:
                print(issue, file=sys.stderr)
            return None
        except UnicodeDecodeError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return None
    for w in caught:
        if isinstance(w.message, IngestWarning):
            print(f"warning: {w.message}", file=sys.stderr)
    return ds


def cmd_validate(args) -> int:
    paths = _data_paths(args)
    opts = IngestOptions(format=args.input_format, strict=args.strict)
    _check_inputs(paths, opts)
    issues = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IngestWarning)
        try:
            load_dataset(*paths, opts=opts)
        except IngestError as exc:
            issues.extend(exc.issues)
        except UnicodeDecodeError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    issues.extend(w.message.issue for w in caught if isinstance(w.message, IngestWarning))
    for issue in sorted(issues, key=lambda i: (i.file, i.line)):
        print(issue)
    return 1 if issues else 0


def _years(n: int) -> str:
    return f"{n} more year" if n == 1 else f"{n} more years"


def _window(first: int, last: int) -> str:
    return str(first) if first == last else f"{first}-{last}"


def cmd_journal(args) -> int:
    ds = _load(args)
    if ds is None:
        return 1
    try:
        rep = journal_report(ds, args.journal, args.year, args.window)
    except UnknownJournal:
        print(f"error: unknown journal {args.journal!r}", file=sys.stderr)
        return 1
    if rep.impact_factor is not None:
        if_line = display(rep.impact_factor)
    elif rep.eligibility.status == "too_new":
        if_line = f"not yet eligible ({_years(rep.eligibility.years_remaining)})"
    elif rep.eligibility.status == "no_data":
        if_line = "no data"
    else:
        if_line = "undefined (B = 0)"
    af_line = display(rep.af) if rep.af is not None else "undefined (A = B = 0)"
    lines = [
        f"journal: {rep.journal_id}",
        f"report year: {rep.report_year}",
        f"IF window: {rep.window}-year, {_window(*rep.window_years)}",
        f"  A: {rep.counts.a}  B: {rep.counts.b}",
        f"IF: {if_line}",
        f"AF window: 1-year, {rep.report_year - 1}",
        f"  A: {rep.af_counts.a}  B: {rep.af_counts.b}",
        f"AF: {af_line}",
    ]
    print("\n".join(lines))
    return 0


def cmd_author(args) -> int:
    ds = _load(args)
    if ds is None:
        return 1
    rep = researcher_report(ds, args.author)
    counts = sorted(rep.citation_counts, reverse=True)
    vector = " ".join(map(str, counts)) if counts else "none"
    print(f"author: {rep.author_id}")
    print(f"papers: {rep.paper_count}")
    print(f"citations: {vector} (total {sum(counts)})")
    print(f"h: {rep.h}  g: {rep.g}  AsF: {display(rep.asf)}")
    return 0


def cmd_rank(args) -> int:
    allowed = JOURNAL_METRICS if args.subjects == "journals" else RESEARCHER_METRICS
    if args.metric not in allowed:
        raise UsageError(f"metric {args.metric!r} does not apply to {args.subjects}; choose from {', '.join(allowed)}")
    if args.subjects == "journals" and args.year is None:
        raise UsageError("--year is required when ranking journals")
    ds = _load(args)
    if ds is None:
        return 1
    if args.subjects == "journals":
        entries = rank_journals(ds, args.year, args.metric, args.window)
    else:
        entries = rank_researchers(ds, args.metric)
    sys.stdout.write(render_ranking(entries, args.format).decode("utf-8"))
    return 0


def cmd_plotdata(args) -> int:
    if args.curve == "af":
        if not args.b:
            raise UsageError("--curve af needs at least one --b")
        if any(b < 1 for b in args.b) or args.a_max < 1:
            raise UsageError("--b and --a-max must be positive")
        series = [af_curve(b, args.a_max) for b in args.b]
    else:
        if args.h_max < 1:
            raise UsageError("--h-max must be positive")
        series = [asf_curve(args.h_max)]
    sys.stdout.write(render(series, args.format).decode("utf-8"))
    return 0


def cmd_table(args) -> int:
    if args.kind == "af":
        if args.b < 1:
            raise UsageError("--b must be positive")
        table = af_table(args.b, args.values or [5, 10, 20, 40])
    else:
        table = asf_table(args.values or [1, 5, 10, 20, 40, 100])
    sys.stdout.write(render(table, args.format).decode("utf-8"))
    for note in table.notes:
        print(f"note: {note}", file=sys.stderr)
    return 0


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {text}")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="citemet", description="Journal and researcher citation indices.")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_data(p):
        p.add_argument(
            "paths",
            nargs="*",
            metavar="FILE",
            help=f"publications, citations and journals files (default: files in ${DATA_DIR_ENV})",
        )
        p.add_argument("--input-format", choices=("auto", "delimited", "jsonl"), default="auto")
        p.add_argument("--strict", action="store_true", help="stop at the first problem; reject unknown doc types")
        return p

    p = with_data(sub.add_parser("validate", help="check data files and list every problem"))
    p.set_defaults(func=cmd_validate)

    p = with_data(sub.add_parser("journal", help="IF and AF report for one journal"))
    p.add_argument("--journal", required=True)
    p.add_argument("--year", type=int, required=True)
    p.add_argument("--window", type=_positive, default=2, help="IF window in years (default 2)")
    p.set_defaults(func=cmd_journal)

    p = with_data(sub.add_parser("author", help="h, g and AsF for one author"))
    p.add_argument("--author", required=True)
    p.set_defaults(func=cmd_author)

    p = with_data(sub.add_parser("rank", help="rank journals or authors"))
    p.add_argument("--subjects", choices=("journals", "authors"), required=True)
    p.add_argument("--metric", choices=JOURNAL_METRICS + RESEARCHER_METRICS, required=True)
    p.add_argument("--year", type=int)
    p.add_argument("--window", type=_positive, default=2)
    p.add_argument("--format", choices=("plain_table", "csv"), default="plain_table")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("plotdata", help="curve data for AF or AsF")
    p.add_argument("--curve", choices=("af", "asf"), required=True)
    p.add_argument("--b", type=int, action="append", help="citable items; repeat for several curves")
    p.add_argument("--a-max", type=int, default=200)
    p.add_argument("--h-max", type=int, default=100)
    p.add_argument("--format", choices=("plain_table", "csv"), default="csv")
    p.set_defaults(func=cmd_plotdata)

    p = sub.add_parser("table", help="AF-by-citations or AsF-by-h summary table")
    p.add_argument("--kind", choices=("af", "asf"), required=True)
    p.add_argument("--b", type=int, default=20, help="citable items for --kind af (default 20)")
    p.add_argument("--values", type=_nonneg, nargs="+", help="citation counts (af) or h values (asf)")
    p.add_argument("--format", choices=("plain_table", "csv"), default="plain_table")
    p.set_defaults(func=cmd_table)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"citemet {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"citemet {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
