"""Rankings, summary tables, plot-data series and their text renderings."""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Mapping, Sequence, Union

from citemet.metrics import (
    CountPair,
    Dataset,
    af_score,
    asf_score,
    if_eligibility,
    impact_factor,
    researcher_report,
    window_counts,
)

JOURNAL_METRICS = ("if", "af")
RESEARCHER_METRICS = ("h", "g", "asf")
FORMATS = ("plain_table", "csv")

UNDEFINED = "undefined"

# Values printed in widely circulated tables that disagree with the formulas.
KNOWN_TABLE_DISCREPANCIES = {
    ("af", 20, 40): "AF(a=40, b=20) = 66.67, shown as 66.7 here; the commonly quoted 66.6 is truncated",
    ("asf", 20): "AsF(h=20) = 95.24, shown as 95.2 here; the commonly quoted 96.2 does not match 100*h/(h+1)",
}


def display(value: float, places: int = 1) -> str:
    """Round half-up to ``places`` decimals, e.g. ``display(68.75) == '68.8'``."""
    quantum = Decimal(1).scaleb(-places)
    return str(Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_UP))


def sig6(value: float) -> str:
    return f"{value:.6g}"


@dataclass(frozen=True)
class RankingEntry:
    subject_id: str
    metric: str
    value: float | int | None
    rank: int

    @property
    def defined(self) -> bool:
        return self.value is not None


def dense_rank(values: Mapping[str, float | int | None], metric: str) -> list[RankingEntry]:
    """Rank subjects by value, highest first, ties sharing a dense rank.

    Ties are listed by ascending subject id. Subjects with no value come last
    and share the rank after the last defined one.
    """
    defined = sorted(((v, s) for s, v in values.items() if v is not None), key=lambda t: (-t[0], t[1]))
    undefined = sorted(s for s, v in values.items() if v is None)
    entries = []
    rank = 0
    previous = object()
    for value, subject in defined:
        if value != previous:
            rank += 1
            previous = value
        entries.append(RankingEntry(subject, metric, value, rank))
    rank += 1
    entries.extend(RankingEntry(s, metric, None, rank) for s in undefined)
    return entries


def journal_metric(ds: Dataset, journal_id: str, report_year: int, metric: str, if_window: int = 2):
    """The value ``rank_journals`` uses for one journal, or None when undefined."""
    if metric == "if":
        counts = window_counts(ds, journal_id, report_year, if_window)
        eligible = if_eligibility(ds.journals[journal_id], ds, report_year).eligible
        return impact_factor(counts) if eligible and counts.b > 0 else None
    if metric == "af":
        counts = window_counts(ds, journal_id, report_year, 1)
        return af_score(counts) if counts.a + counts.b > 0 else None
    raise ValueError(f"not a journal metric: {metric!r}")


def rank_journals(ds: Dataset, report_year: int, metric: str = "af", if_window: int = 2) -> list[RankingEntry]:
    values = {j: journal_metric(ds, j, report_year, metric, if_window) for j in ds.journals}
    return dense_rank(values, metric)


def rank_researchers(ds: Dataset, metric: str = "h") -> list[RankingEntry]:
    if metric not in RESEARCHER_METRICS:
        raise ValueError(f"not a researcher metric: {metric!r}")
    values = {}
    for author in ds.author_ids:
        rep = researcher_report(ds, author)
        values[author] = {"h": rep.h, "g": rep.g, "asf": rep.asf}[metric]
    return dense_rank(values, metric)


def rank_counts(pairs: Mapping[str, CountPair], metric: str) -> list[RankingEntry]:
    """Rank bare count pairs by ``af`` or by one-year ``if``, no eligibility gating."""
    if metric == "af":
        values = {k: af_score(c) if c.a + c.b else None for k, c in pairs.items()}
    elif metric == "if":
        values = {k: impact_factor(c) if c.b else None for k, c in pairs.items()}
    else:
        raise ValueError(f"not a journal metric: {metric!r}")
    return dense_rank(values, metric)


def rank_h_values(h_values: Mapping[str, int], metric: str) -> list[RankingEntry]:
    transform = {"h": lambda h: h, "asf": asf_score}[metric]
    return dense_rank({k: transform(h) for k, h in h_values.items()}, metric)


@dataclass(frozen=True)
class Table:
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    notes: tuple[str, ...] = ()


def af_table(b: int, citation_values: Sequence[int]) -> Table:
    if not citation_values:
        raise ValueError("citation_values must not be empty")
    rows = tuple((a, display(af_score(CountPair(a, b)))) for a in citation_values)
    keys = [("af", b, a) for a in citation_values]
    notes = tuple(KNOWN_TABLE_DISCREPANCIES[k] for k in keys if k in KNOWN_TABLE_DISCREPANCIES)
    return Table(("citations", "af"), rows, notes)


def asf_table(h_values: Sequence[int]) -> Table:
    rows = tuple((h, display(asf_score(h))) for h in h_values)
    notes = tuple(KNOWN_TABLE_DISCREPANCIES[("asf", h)] for h in h_values if ("asf", h) in KNOWN_TABLE_DISCREPANCIES)
    return Table(("h", "asf"), rows, notes)


@dataclass(frozen=True)
class Series:
    label: str
    points: tuple[tuple[float, float], ...] = field(default=())

    def __post_init__(self):
        xs = [x for x, _ in self.points]
        if any(x1 >= x2 for x1, x2 in zip(xs, xs[1:])):
            raise ValueError(f"x must be strictly increasing in series {self.label!r}")


def af_curve(b: int, a_max: int = 200) -> Series:
    if b < 1 or a_max < 1:
        raise ValueError("b and a_max must be >= 1")
    return Series(f"af b={b}", tuple((a, af_score(CountPair(a, b))) for a in range(a_max + 1)))


def asf_curve(h_max: int = 100) -> Series:
    if h_max < 1:
        raise ValueError("h_max must be >= 1")
    return Series("asf", tuple((h, asf_score(h)) for h in range(h_max + 1)))


Renderable = Union[Table, Series, Sequence[Series], Sequence[RankingEntry]]


def _ranking_rows(entries: Sequence[RankingEntry], fmt: str):
    def value(v):
        if v is None:
            return UNDEFINED
        if isinstance(v, int):
            return str(v)
        return sig6(v) if fmt == "csv" else display(v)

    return ("rank", "subject_id", "metric", "value"), [
        (str(e.rank), e.subject_id, e.metric, value(e.value)) for e in entries
    ]


def _series_rows(series: Iterable[Series], fmt: str):
    y = sig6 if fmt == "csv" else display
    return ("label", "x", "y"), [(s.label, str(px), y(py)) for s in series for px, py in s.points]


def _plain(columns: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [max([len(c)] + [len(r[i]) for r in rows]) for i, c in enumerate(columns)]
    numeric = [all(_is_number(r[i]) for r in rows) and bool(rows) for i in range(len(columns))]

    def line(cells):
        out = [c.rjust(w) if num else c.ljust(w) for c, w, num in zip(cells, widths, numeric)]
        return "  ".join(out).rstrip()

    parts = [line(columns), "  ".join("-" * w for w in widths)]
    parts.extend(line(r) for r in rows)
    return "\n".join(parts) + "\n"


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def render(obj: Renderable, fmt: str = "plain_table") -> bytes:
    """Render a table, series, list of series or ranking as text bytes.

    ``csv`` output is a header plus comma-separated rows with LF endings;
    ``plain_table`` is a space-aligned table. Both are deterministic for a
    given input. Ranking and series values are written with six significant
    digits in csv and rounded half-up to one decimal in plain tables.
    """
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}")
    if isinstance(obj, Table):
        return _emit(obj.columns, [tuple(str(c) for c in r) for r in obj.rows], fmt)
    if isinstance(obj, Series):
        return _emit(*_series_rows([obj], fmt), fmt)
    items = list(obj)
    if items and isinstance(items[0], RankingEntry):
        return render_ranking(items, fmt)
    return _emit(*_series_rows(items, fmt), fmt)


def render_ranking(entries: Sequence[RankingEntry], fmt: str = "plain_table") -> bytes:
    """Like :func:`render`, but an empty list still gets the ranking header."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}")
    return _emit(*_ranking_rows(entries, fmt), fmt)


def _emit(columns, rows, fmt: str) -> bytes:
    if fmt == "plain_table":
        return _plain(columns, rows).encode("utf-8")
    out = io.StringIO()
    for r in [columns, *rows]:
        out.write(",".join(r) + "\n")
    return out.getvalue().encode("utf-8")
