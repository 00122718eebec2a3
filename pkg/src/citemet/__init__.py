"""Journal (IF, AF) and researcher (h, g, AsF) citation indices."""

from citemet.ingest import (
    IngestError,
    IngestOptions,
    IngestWarning,
    ParseIssue,
    build_dataset,
    load_dataset,
    parse_citations,
    parse_journals,
    parse_publications,
)
from citemet.metrics import (
    CitationRecord,
    CountPair,
    Dataset,
    DocType,
    Eligibility,
    JournalMeta,
    MetricReport,
    PublicationRecord,
    ResearcherReport,
    UndefinedRatio,
    UnknownJournal,
    af_score,
    asf_score,
    g_index,
    h_index,
    if_eligibility,
    impact_factor,
    is_citable,
    journal_report,
    researcher_report,
    window_counts,
)
from citemet.report import (
    RankingEntry,
    Series,
    Table,
    af_curve,
    af_table,
    asf_curve,
    asf_table,
    rank_journals,
    rank_researchers,
    render,
)

__version__ = "0.1.0"
