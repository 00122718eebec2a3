"""Domain types and index arithmetic for journals and researchers.

Everything here is a pure function over an immutable :class:`Dataset`, so the
operations can be called from any number of threads without locking.
"""

from __future__ import annotations

import enum
import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

MIN_YEAR = 1500
MAX_YEAR = 9999

# Tokens must survive both the delimited and the jsonl formats unchanged.
_TOKEN_RE = re.compile(r"[^\s,;]+")


class UnknownJournal(LookupError):
    """Raised when a journal id has no metadata in the dataset."""


class UndefinedRatio(ZeroDivisionError):
    """Raised when an index has no value (as opposed to a value of zero)."""


class DocType(str, enum.Enum):
    ARTICLE = "article"
    REVIEW = "review"
    PROCEEDINGS = "proceedings"
    NOTE = "note"
    EDITORIAL = "editorial"
    LETTER = "letter"
    OTHER = "other"

    @property
    def citable(self) -> bool:
        return self in _CITABLE


_CITABLE = frozenset({DocType.ARTICLE, DocType.REVIEW, DocType.PROCEEDINGS, DocType.NOTE})


def is_citable(doc_type: DocType) -> bool:
    """True for the document types counted in the impact-factor denominator."""
    return DocType(doc_type) in _CITABLE


def is_token(value: object) -> bool:
    return isinstance(value, str) and _TOKEN_RE.fullmatch(value) is not None


def is_year(value: object) -> bool:
    return type(value) is int and MIN_YEAR <= value <= MAX_YEAR


def _check_token(name: str, value: object) -> None:
    if not is_token(value):
        raise ValueError(f"{name} must be a non-empty token without whitespace, ',' or ';': {value!r}")


def _check_year(name: str, value: object) -> None:
    if not is_year(value):
        raise ValueError(f"{name} must be an integer year in [{MIN_YEAR}, {MAX_YEAR}]: {value!r}")


@dataclass(frozen=True)
class PublicationRecord:
    article_id: str
    journal_id: str
    pub_year: int
    doc_type: DocType
    author_ids: tuple[str, ...] = ()

    def __post_init__(self):
        _check_token("article_id", self.article_id)
        _check_token("journal_id", self.journal_id)
        _check_year("pub_year", self.pub_year)
        object.__setattr__(self, "doc_type", DocType(self.doc_type))
        authors = tuple(self.author_ids)
        for a in authors:
            _check_token("author_id", a)
        if len(set(authors)) != len(authors):
            raise ValueError(f"duplicate author ids in {self.article_id}: {authors}")
        object.__setattr__(self, "author_ids", authors)


@dataclass(frozen=True)
class CitationRecord:
    citing_id: str
    cited_id: str
    citation_year: int

    def __post_init__(self):
        _check_token("citing_id", self.citing_id)
        _check_token("cited_id", self.cited_id)
        _check_year("citation_year", self.citation_year)


@dataclass(frozen=True)
class JournalMeta:
    journal_id: str
    first_indexed_year: int
    indexed_from_first_volume: bool

    def __post_init__(self):
        _check_token("journal_id", self.journal_id)
        _check_year("first_indexed_year", self.first_indexed_year)
        if not isinstance(self.indexed_from_first_volume, bool):
            raise ValueError("indexed_from_first_volume must be a bool")


@dataclass(frozen=True)
class CountPair:
    """Citations received (``a``) and citable items published (``b``)."""

    a: int
    b: int

    def __post_init__(self):
        if type(self.a) is not int or type(self.b) is not int or self.a < 0 or self.b < 0:
            raise ValueError(f"counts must be non-negative integers: ({self.a!r}, {self.b!r})")


@dataclass(frozen=True)
class Eligibility:
    """Whether a journal receives an impact factor in a given report year.

    ``status`` is one of ``"eligible"``, ``"too_new"`` or ``"no_data"``;
    ``years_remaining`` is only meaningful (and always >= 1) for ``too_new``.
    """

    status: str
    years_remaining: int = 0

    def __post_init__(self):
        if self.status not in ("eligible", "too_new", "no_data"):
            raise ValueError(f"unknown eligibility status {self.status!r}")
        if self.status == "too_new" and self.years_remaining < 1:
            raise ValueError("too_new requires years_remaining >= 1")
        if self.status != "too_new" and self.years_remaining != 0:
            raise ValueError("years_remaining is only set for too_new")

    @property
    def eligible(self) -> bool:
        return self.status == "eligible"


ELIGIBLE = Eligibility("eligible")
NO_DATA = Eligibility("no_data")


def too_new(years_remaining: int) -> Eligibility:
    return Eligibility("too_new", years_remaining)


class Dataset:
    """Immutable, indexed store of publications, citations and journal metadata.

    The constructor only builds indexes; use
    :func:`citemet.ingest.build_dataset` to get referential checks.
    """

    __slots__ = (
        "_publications",
        "_citations",
        "_journals",
        "_by_journal_year",
        "_by_journal",
        "_by_author",
        "_cited_by",
        "_cited_by_year",
        "_frozen",
    )

    def __init__(
        self,
        publications: Iterable[PublicationRecord],
        citations: Iterable[CitationRecord],
        journals: Iterable[JournalMeta],
    ):
        pubs = {p.article_id: p for p in publications}
        cites = tuple(citations)
        metas = {j.journal_id: j for j in journals}

        by_journal_year: dict[tuple[str, int], list[PublicationRecord]] = defaultdict(list)
        by_journal: dict[str, list[PublicationRecord]] = defaultdict(list)
        by_author: dict[str, list[PublicationRecord]] = defaultdict(list)
        for p in pubs.values():
            by_journal_year[(p.journal_id, p.pub_year)].append(p)
            by_journal[p.journal_id].append(p)
            for author in p.author_ids:
                by_author[author].append(p)
        cited_by: dict[str, list[CitationRecord]] = defaultdict(list)
        cited_by_year: Counter[tuple[str, int]] = Counter()
        for c in cites:
            cited_by[c.cited_id].append(c)
            cited_by_year[(c.cited_id, c.citation_year)] += 1

        def freeze(d):
            return MappingProxyType({k: tuple(v) for k, v in d.items()})

        self._publications = MappingProxyType(pubs)
        self._citations = cites
        self._journals = MappingProxyType(metas)
        self._by_journal_year = freeze(by_journal_year)
        self._by_journal = freeze(by_journal)
        self._by_author = freeze(by_author)
        self._cited_by = freeze(cited_by)
        self._cited_by_year = MappingProxyType(dict(cited_by_year))
        self._frozen = True

    def __setattr__(self, name, value):
        if getattr(self, "_frozen", False):
            raise AttributeError("Dataset is immutable")
        object.__setattr__(self, name, value)

    def __repr__(self):
        return (
            f"Dataset({len(self._publications)} publications, "
            f"{len(self._citations)} citations, {len(self._journals)} journals)"
        )

    @property
    def publications(self) -> Mapping[str, PublicationRecord]:
        return self._publications

    @property
    def citations(self) -> tuple[CitationRecord, ...]:
        return self._citations

    @property
    def journals(self) -> Mapping[str, JournalMeta]:
        return self._journals

    @property
    def author_ids(self) -> list[str]:
        return sorted(self._by_author)

    def publications_of(self, journal_id: str, pub_year: int | None = None) -> tuple[PublicationRecord, ...]:
        if pub_year is None:
            return self._by_journal.get(journal_id, ())
        return self._by_journal_year.get((journal_id, pub_year), ())

    def publications_by(self, author_id: str) -> tuple[PublicationRecord, ...]:
        return self._by_author.get(author_id, ())

    def citations_to(self, article_id: str) -> tuple[CitationRecord, ...]:
        return self._cited_by.get(article_id, ())

    def citation_count(self, article_id: str, year: int | None = None) -> int:
        if year is None:
            return len(self._cited_by.get(article_id, ()))
        return self._cited_by_year.get((article_id, year), 0)


def window_counts(ds: Dataset, journal_id: str, report_year: int, window: int = 2) -> CountPair:
    """Count citations and citable items for a journal's publication window.

    The window covers the ``window`` publication years immediately before
    ``report_year``. ``b`` counts citable items only; ``a`` counts every
    report-year citation to any item of the journal published in the window,
    non-citable items included. Years without publications contribute zero.
    """
    if journal_id not in ds.journals:
        raise UnknownJournal(journal_id)
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    a = b = 0
    for year in range(report_year - window, report_year):
        for pub in ds.publications_of(journal_id, year):
            if pub.doc_type.citable:
                b += 1
            a += ds.citation_count(pub.article_id, report_year)
    return CountPair(a, b)


def impact_factor(c: CountPair) -> float:
    """Return a / b. Raises :class:`UndefinedRatio` when there are no citable items."""
    if c.b == 0:
        raise UndefinedRatio("impact factor is undefined when no citable items were published")
    return c.a / c.b


def af_score(c: CountPair) -> float:
    """Percentage of citations among citations plus citable items, in [0, 100]."""
    total = c.a + c.b
    if total == 0:
        raise UndefinedRatio("AF is undefined with no citations and no citable items")
    return 100 * c.a / total


def if_eligibility(meta: JournalMeta, ds: Dataset, report_year: int) -> Eligibility:
    if not ds.publications_of(meta.journal_id):
        return NO_DATA
    indexed_years = report_year - meta.first_indexed_year
    required = 2 if meta.indexed_from_first_volume else 3
    if indexed_years >= required:
        return ELIGIBLE
    return too_new(required - indexed_years)


def h_index(citation_counts: Iterable[int]) -> int:
    ranked = sorted(citation_counts, reverse=True)
    h = 0
    for position, count in enumerate(ranked, 1):
        if count < position:
            break
        h = position
    return h


def g_index(citation_counts: Iterable[int]) -> int:
    """Largest g <= n such that the g most cited papers total at least g**2 citations."""
    ranked = sorted(citation_counts, reverse=True)
    total = 0
    g = 0
    # prefix sums of a descending list are concave, so the first failure is final
    for position, count in enumerate(ranked, 1):
        total += count
        if total < position * position:
            break
        g = position
    return g


def asf_score(h: int) -> float:
    if h < 0:
        raise ValueError(f"h must be non-negative, got {h}")
    return 100 * h / (h + 1)


@dataclass(frozen=True)
class MetricReport:
    journal_id: str
    report_year: int
    window: int
    counts: CountPair
    eligibility: Eligibility
    impact_factor: float | None
    af_counts: CountPair
    af: float | None

    @property
    def window_years(self) -> tuple[int, int]:
        return self.report_year - self.window, self.report_year - 1


@dataclass(frozen=True)
class ResearcherReport:
    author_id: str
    citation_counts: tuple[int, ...] = field(default=())
    h: int = 0
    g: int = 0
    asf: float = 0.0

    @property
    def paper_count(self) -> int:
        return len(self.citation_counts)


def journal_report(ds: Dataset, journal_id: str, report_year: int, if_window: int = 2) -> MetricReport:
    meta = ds.journals.get(journal_id)
    if meta is None:
        raise UnknownJournal(journal_id)
    counts = window_counts(ds, journal_id, report_year, if_window)
    eligibility = if_eligibility(meta, ds, report_year)
    if_value = impact_factor(counts) if eligibility.eligible and counts.b > 0 else None
    af_counts = window_counts(ds, journal_id, report_year, 1)
    af = af_score(af_counts) if af_counts.a + af_counts.b > 0 else None
    return MetricReport(journal_id, report_year, if_window, counts, eligibility, if_value, af_counts, af)


def researcher_report(ds: Dataset, author_id: str) -> ResearcherReport:
    counts = tuple(ds.citation_count(p.article_id) for p in ds.publications_by(author_id))
    h = h_index(counts)
    return ResearcherReport(author_id, counts, h, g_index(counts), asf_score(h))


def journal_reports(ds: Dataset, report_year: int, if_window: int = 2) -> list[MetricReport]:
    """Reports for every journal in ``ds``, in ascending journal id order."""
    return [journal_report(ds, j, report_year, if_window) for j in sorted(ds.journals)]


def researcher_reports(ds: Dataset, author_ids: Sequence[str] | None = None) -> list[ResearcherReport]:
    ids = ds.author_ids if author_ids is None else sorted(author_ids)
    return [researcher_report(ds, a) for a in ids]
