"""Readers and writers for the publication, citation and journal files.

Two layouts are supported, both UTF-8 with LF or CRLF line endings:

* delimited (``.csv`` comma, ``.tsv`` tab) with a mandatory header row; ids
  are bare tokens, so quoting is not supported;
* jsonl, one JSON object per line with the same field names.

Parsing never drops a bad line silently. In lenient mode every malformed line
produces exactly one :class:`ParseIssue` and the file is rejected with an
:class:`IngestError` carrying all of them. The only non-fatal case is an
unknown ``doc_type`` in lenient mode: the record is kept as ``other`` and an
:class:`IngestWarning` is emitted through :mod:`warnings`.
"""

from __future__ import annotations

import io
import json
import os
import warnings
from dataclasses import dataclass
from typing import BinaryIO, Callable, Iterator, Sequence, Union

from citemet.metrics import (
    CitationRecord,
    Dataset,
    DocType,
    JournalMeta,
    PublicationRecord,
    is_token,
    is_year,
)

Source = Union[bytes, BinaryIO]

ISSUE_KINDS = (
    "bad_field_count",
    "empty_token",
    "bad_token",
    "bad_json",
    "bad_year",
    "bad_doc_type",
    "bad_boolean",
    "duplicate_author_id",
    "duplicate_article_id",
    "duplicate_journal_id",
    "unknown_cited_id",
    "unknown_journal_id",
    "citation_precedes_publication",
    "publication_before_indexing",
)

PUBLICATION_FIELDS = ("article_id", "journal_id", "pub_year", "doc_type", "author_ids")
CITATION_FIELDS = ("citing_id", "cited_id", "citation_year")
JOURNAL_FIELDS = ("journal_id", "first_indexed_year", "indexed_from_first_volume")

_DELIMITERS = {".csv": ",", ".tsv": "\t"}


@dataclass(frozen=True, order=True)
class ParseIssue:
    file: str
    line: int
    kind: str
    detail: str

    def __post_init__(self):
        if self.kind not in ISSUE_KINDS:
            raise ValueError(f"unknown issue kind {self.kind!r}")
        if self.line < 1:
            raise ValueError("line numbers are 1-based")

    def __str__(self):
        return f"{self.file}:{self.line}: {self.kind}: {self.detail}"


class IngestError(Exception):
    """A file or dataset was rejected; ``issues`` lists every problem found."""

    def __init__(self, issues: Sequence[ParseIssue]):
        self.issues = sorted(issues)
        super().__init__("\n".join(str(i) for i in self.issues))


class IngestWarning(UserWarning):
    """A recoverable problem; ``issue`` holds the details."""

    def __init__(self, issue: ParseIssue):
        self.issue = issue
        super().__init__(str(issue))


@dataclass(frozen=True)
class IngestOptions:
    format: str = "auto"  # delimited | jsonl | auto
    strict: bool = False

    def __post_init__(self):
        if self.format not in ("delimited", "jsonl", "auto"):
            raise ValueError(f"unknown format {self.format!r}")


def resolve_format(opts: IngestOptions, name: str) -> tuple[str, str]:
    """Return ``(format, delimiter)`` for a source called ``name``."""
    ext = os.path.splitext(name)[1].lower()
    fmt = opts.format
    if fmt == "auto":
        if ext in _DELIMITERS:
            fmt = "delimited"
        elif ext == ".jsonl":
            fmt = "jsonl"
        else:
            raise ValueError(f"cannot infer format from {name!r}; use .csv, .tsv or .jsonl")
    return fmt, _DELIMITERS.get(ext, ",")


class _LineError(Exception):
    def __init__(self, kind: str, detail: str):
        self.kind = kind
        self.detail = detail


def _token(fields: dict, name: str) -> str:
    value = fields[name]
    if value == "":
        raise _LineError("empty_token", f"{name} is empty")
    if not is_token(value):
        raise _LineError("bad_token", f"{name} is not a valid token: {value!r}")
    return value


def _year(fields: dict, name: str, typed: bool) -> int:
    value = fields[name]
    if isinstance(value, str) and not typed:
        if not (value.isascii() and value.isdigit()):
            raise _LineError("bad_year", f"{name} is not an integer year: {value!r}")
        value = int(value)
    if not is_year(value):
        raise _LineError("bad_year", f"{name} out of range or not an integer: {value!r}")
    return value


def _publication(fields: dict, strict: bool, warn: Callable[[str, str], None], typed: bool) -> PublicationRecord:
    article_id = _token(fields, "article_id")
    journal_id = _token(fields, "journal_id")
    pub_year = _year(fields, "pub_year", typed)
    raw_type = fields["doc_type"]
    if raw_type == "":
        raise _LineError("empty_token", "doc_type is empty")
    if not isinstance(raw_type, str):
        raise _LineError("bad_doc_type", f"doc_type is not a string: {raw_type!r}")
    try:
        doc_type = DocType(raw_type)
    except ValueError:
        if strict:
            raise _LineError("bad_doc_type", f"unknown doc_type {raw_type!r}") from None
        warn("bad_doc_type", f"unknown doc_type {raw_type!r} read as 'other'")
        doc_type = DocType.OTHER
    authors = fields["author_ids"]
    if not typed:
        authors = authors.split(";") if authors else []
    elif not isinstance(authors, list):
        raise _LineError("bad_token", f"author_ids must be a list: {authors!r}")
    for a in authors:
        if a == "":
            raise _LineError("empty_token", "empty entry in author_ids")
        if not is_token(a):
            raise _LineError("bad_token", f"author id is not a valid token: {a!r}")
    if len(set(authors)) != len(authors):
        raise _LineError("duplicate_author_id", f"author_ids repeats an id: {';'.join(authors)}")
    return PublicationRecord(article_id, journal_id, pub_year, doc_type, tuple(authors))


def _citation(fields: dict, strict: bool, warn, typed: bool) -> CitationRecord:
    return CitationRecord(
        _token(fields, "citing_id"), _token(fields, "cited_id"), _year(fields, "citation_year", typed)
    )


def _journal(fields: dict, strict: bool, warn, typed: bool) -> JournalMeta:
    journal_id = _token(fields, "journal_id")
    year = _year(fields, "first_indexed_year", typed)
    flag = fields["indexed_from_first_volume"]
    if not typed and flag in ("true", "false"):
        flag = flag == "true"
    elif not isinstance(flag, bool):
        raise _LineError("bad_boolean", f"indexed_from_first_volume must be true or false: {flag!r}")
    return JournalMeta(journal_id, year, flag)


def _read_text(source: Source) -> str:
    data = source if isinstance(source, (bytes, bytearray)) else source.read()
    return bytes(data).decode("utf-8")


def _rows(text: str, fmt: str, delimiter: str, columns: tuple[str, ...]) -> Iterator[tuple[int, dict | _LineError]]:
    """Yield ``(line_number, fields)`` or ``(line_number, error)`` per physical line."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    start = 0
    if fmt == "delimited":
        header = lines[0].rstrip("\r") if lines else ""
        expected = delimiter.join(columns)
        if header != expected:
            yield 1, _LineError("bad_field_count", f"header must be {expected!r}, got {header!r}")
            return
        start = 1
    for number, line in enumerate(lines[start:], start + 1):
        line = line.rstrip("\r")
        if not line.strip():
            continue
        if fmt == "delimited":
            values = line.split(delimiter)
            if len(values) != len(columns):
                yield number, _LineError(
                    "bad_field_count", f"expected {len(columns)} fields, got {len(values)}"
                )
                continue
            yield number, dict(zip(columns, values))
        else:
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                yield number, _LineError("bad_json", f"invalid JSON: {exc.msg}")
                continue
            if not isinstance(obj, dict) or set(obj) != set(columns):
                got = sorted(obj) if isinstance(obj, dict) else type(obj).__name__
                yield number, _LineError("bad_field_count", f"expected keys {list(columns)}, got {got}")
                continue
            yield number, obj


def _parse(source: Source, opts: IngestOptions, name: str, columns, build) -> list[tuple[int, object]]:
    fmt, delimiter = resolve_format(opts, name)
    text = _read_text(source)
    records: list[tuple[int, object]] = []
    issues: list[ParseIssue] = []
    for number, row in _rows(text, fmt, delimiter, columns):
        if isinstance(row, _LineError):
            err = row
        else:
            pending: list[ParseIssue] = []
            try:
                record = build(
                    row, opts.strict, lambda k, d: pending.append(ParseIssue(name, number, k, d)), fmt == "jsonl"
                )
            except _LineError as exc:
                err = exc
            else:
                # warn only for lines that are otherwise fine: one issue per line
                for issue in pending:
                    warnings.warn(IngestWarning(issue), stacklevel=4)
                records.append((number, record))
                continue
        issues.append(ParseIssue(name, number, err.kind, err.detail))
        if opts.strict:
            break
    if issues:
        raise IngestError(issues)
    return records


def _located(kind: str):
    columns, build = {
        "publications": (PUBLICATION_FIELDS, _publication),
        "citations": (CITATION_FIELDS, _citation),
        "journals": (JOURNAL_FIELDS, _journal),
    }[kind]

    def parse(source: Source, opts: IngestOptions = IngestOptions(), name: str = f"<{kind}>"):
        return _parse(source, opts, name, columns, build)

    return parse


_parse_publications = _located("publications")
_parse_citations = _located("citations")
_parse_journals = _located("journals")


def parse_publications(
    source: Source, opts: IngestOptions = IngestOptions(), name: str = "<publications>"
) -> list[PublicationRecord]:
    """Parse a publications file.

    ``name`` is used both in issue reports and, when ``opts.format`` is
    ``"auto"``, to pick the layout from its extension; anonymous streams must
    therefore pass an explicit format.

    Raises:
        IngestError: if any line is malformed (in strict mode, on the first).
    """
    return [r for _, r in _parse_publications(source, opts, name)]


def parse_citations(
    source: Source, opts: IngestOptions = IngestOptions(), name: str = "<citations>"
) -> list[CitationRecord]:
    return [r for _, r in _parse_citations(source, opts, name)]


def parse_journals(
    source: Source, opts: IngestOptions = IngestOptions(), name: str = "<journals>"
) -> list[JournalMeta]:
    return [r for _, r in _parse_journals(source, opts, name)]


def _cells(record, fmt: str) -> dict:
    if isinstance(record, PublicationRecord):
        authors = list(record.author_ids)
        return {
            "article_id": record.article_id,
            "journal_id": record.journal_id,
            "pub_year": record.pub_year,
            "doc_type": record.doc_type.value,
            "author_ids": authors if fmt == "jsonl" else ";".join(authors),
        }
    if isinstance(record, CitationRecord):
        return {"citing_id": record.citing_id, "cited_id": record.cited_id, "citation_year": record.citation_year}
    flag = record.indexed_from_first_volume
    return {
        "journal_id": record.journal_id,
        "first_indexed_year": record.first_indexed_year,
        "indexed_from_first_volume": flag if fmt == "jsonl" else str(flag).lower(),
    }


def _serialize(records, columns, fmt: str, delimiter: str) -> bytes:
    out = io.StringIO()
    if fmt == "delimited":
        out.write(delimiter.join(columns) + "\n")
        for r in records:
            cells = _cells(r, fmt)
            out.write(delimiter.join(str(cells[c]) for c in columns) + "\n")
    elif fmt == "jsonl":
        for r in records:
            out.write(json.dumps(_cells(r, fmt), ensure_ascii=False) + "\n")
    else:
        raise ValueError(f"cannot serialize to format {fmt!r}")
    return out.getvalue().encode("utf-8")


def serialize_publications(records, fmt: str = "delimited", delimiter: str = ",") -> bytes:
    return _serialize(records, PUBLICATION_FIELDS, fmt, delimiter)


def serialize_citations(records, fmt: str = "delimited", delimiter: str = ",") -> bytes:
    return _serialize(records, CITATION_FIELDS, fmt, delimiter)


def serialize_journals(records, fmt: str = "delimited", delimiter: str = ",") -> bytes:
    return _serialize(records, JOURNAL_FIELDS, fmt, delimiter)


@dataclass(frozen=True)
class Origin:
    """Where a list of records came from, for issue reporting."""

    file: str
    lines: Sequence[int]


def _default_origin(kind: str, n: int) -> Origin:
    # records written by serialize_* sit one line below a header
    return Origin(f"<{kind}>", range(2, n + 2))


def build_dataset(
    pubs: Sequence[PublicationRecord],
    cites: Sequence[CitationRecord],
    journals: Sequence[JournalMeta],
    *,
    origins: dict[str, Origin] | None = None,
) -> Dataset:
    """Check referential integrity and build the indexed :class:`Dataset`.

    Citing ids may point outside the dataset; cited ids may not. All problems
    are collected before raising.

    Raises:
        IngestError: with one issue per offending record.
    """
    origins = dict(origins or {})
    for kind, recs in (("publications", pubs), ("citations", cites), ("journals", journals)):
        origins.setdefault(kind, _default_origin(kind, len(recs)))

    issues: list[ParseIssue] = []

    def report(kind: str, index: int, issue_kind: str, detail: str):
        origin = origins[kind]
        issues.append(ParseIssue(origin.file, origin.lines[index], issue_kind, detail))

    metas: dict[str, JournalMeta] = {}
    for i, meta in enumerate(journals):
        if meta.journal_id in metas:
            report("journals", i, "duplicate_journal_id", f"journal {meta.journal_id} listed twice")
        else:
            metas[meta.journal_id] = meta

    seen: dict[str, PublicationRecord] = {}
    for i, pub in enumerate(pubs):
        if pub.article_id in seen:
            report("publications", i, "duplicate_article_id", f"article {pub.article_id} listed twice")
            continue
        seen[pub.article_id] = pub
        meta = metas.get(pub.journal_id)
        if meta is None:
            report("publications", i, "unknown_journal_id", f"journal {pub.journal_id} has no metadata")
        elif pub.pub_year < meta.first_indexed_year:
            report(
                "publications",
                i,
                "publication_before_indexing",
                f"{pub.article_id} ({pub.pub_year}) predates indexing of {meta.journal_id} ({meta.first_indexed_year})",
            )

    for i, cite in enumerate(cites):
        target = seen.get(cite.cited_id)
        if target is None:
            report("citations", i, "unknown_cited_id", f"cited id {cite.cited_id} is not a known publication")
        elif cite.citation_year < target.pub_year:
            report(
                "citations",
                i,
                "citation_precedes_publication",
                f"{cite.citing_id} cites {cite.cited_id} in {cite.citation_year}, before {target.pub_year}",
            )

    if issues:
        raise IngestError(issues)
    return Dataset(pubs, cites, journals)


def load_dataset(
    publications: str | os.PathLike,
    citations: str | os.PathLike,
    journals: str | os.PathLike,
    opts: IngestOptions = IngestOptions(),
) -> Dataset:
    """Parse the three files and build a dataset.

    In lenient mode issues from all three files are reported together; strict
    mode stops at the first one.

    Raises:
        IngestError: on any parse or referential problem.
        OSError: if a file cannot be read.
    """
    parsed = {}
    issues: list[ParseIssue] = []
    for kind, path, parse in (
        ("publications", publications, _parse_publications),
        ("citations", citations, _parse_citations),
        ("journals", journals, _parse_journals),
    ):
        name = os.fspath(path)
        with open(name, "rb") as fh:
            try:
                located = parse(fh, opts, name)
            except IngestError as exc:
                if opts.strict:
                    raise
                issues.extend(exc.issues)
                continue
        parsed[kind] = ([r for _, r in located], Origin(name, [n for n, _ in located]))
    if issues:
        raise IngestError(issues)
    try:
        return build_dataset(
            parsed["publications"][0],
            parsed["citations"][0],
            parsed["journals"][0],
            origins={kind: origin for kind, (_, origin) in parsed.items()},
        )
    except IngestError as exc:
        if opts.strict:
            raise IngestError(exc.issues[:1]) from None
        raise
