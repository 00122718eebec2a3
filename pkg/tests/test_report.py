import random

import pytest
from oracles import af_exact

from citemet.ingest import build_dataset
from citemet.metrics import CitationRecord, CountPair, DocType, JournalMeta, PublicationRecord, researcher_report
from citemet.report import (
    RankingEntry,
    Series,
    af_curve,
    af_table,
    asf_curve,
    asf_table,
    dense_rank,
    display,
    rank_counts,
    rank_journals,
    rank_researchers,
    render,
    render_ranking,
)


def journals_ds(pairs, report_year=2012, first_volume=True, first_year=2000):
    """One journal per (a, b) pair: b citable items in report_year - 1, a citations to them."""
    pubs, cites, metas = [], [], []
    for j, (a, b) in pairs.items():
        metas.append(JournalMeta(j, first_year, first_volume))
        ids = [f"{j}-p{i}" for i in range(max(b, 1))]
        for i, aid in enumerate(ids):
            doc = DocType.ARTICLE if i < b else DocType.EDITORIAL
            pubs.append(PublicationRecord(aid, j, report_year - 1, doc, (f"{j}-author",)))
        cites.extend(CitationRecord(f"x{k}", ids[k % len(ids)], report_year) for k in range(a))
    return build_dataset(pubs, cites, metas)


class TestDisplay:
    @pytest.mark.parametrize(
        "value,text",
        [(68.75, "68.8"), (200 / 3, "66.7"), (100 / 3, "33.3"), (20.0, "20.0"), (0.05, "0.1"), (99.0099, "99.0"), (0.0, "0.0")],
    )
    def test_half_up(self, value, text):
        assert display(value) == text


class TestDenseRank:
    def test_distinct(self):
        assert [(e.subject_id, e.rank) for e in dense_rank({"x": 20.0, "y": 50.0}, "af")] == [("y", 1), ("x", 2)]

    def test_ties(self):
        got = dense_rank({"b": 50.0, "a": 50.0, "c": 10.0}, "af")
        assert [(e.subject_id, e.rank) for e in got] == [("a", 1), ("b", 1), ("c", 2)]

    def test_undefined_last(self):
        got = dense_rank({"a": None, "b": 0.0, "c": None}, "if")
        assert [(e.subject_id, e.value, e.rank) for e in got] == [("b", 0.0, 1), ("a", None, 2), ("c", None, 2)]

    def test_empty(self):
        assert dense_rank({}, "h") == []


class TestRankJournals:
    def test_two_journals(self):
        ds = journals_ds({"ja": (5, 20), "jb": (20, 20)})
        assert [(e.subject_id, e.rank) for e in rank_journals(ds, 2012, "af")] == [("jb", 1), ("ja", 2)]

    def test_equal_af_dense(self):
        ds = journals_ds({"ja": (20, 20), "jb": (10, 10), "jc": (1, 4)})
        got = rank_journals(ds, 2012, "af")
        assert [(e.subject_id, e.rank, e.value) for e in got] == [("ja", 1, 50.0), ("jb", 1, 50.0), ("jc", 2, 20.0)]

    def test_af_and_if_agree(self):
        ds = journals_ds({"j1": (20, 20), "j2": (10, 5)})
        af = rank_journals(ds, 2012, "af")
        one_year_if = rank_journals(ds, 2012, "if", if_window=1)
        assert [e.subject_id for e in af] == [e.subject_id for e in one_year_if] == ["j2", "j1"]
        assert [e.value for e in one_year_if] == [2.0, 1.0]
        assert display(af[0].value) == "66.7" and af[1].value == 50.0

    def test_ineligible_sorts_last(self):
        ds = journals_ds({"old": (1, 10), "new": (50, 10)})
        ds_new = build_dataset(
            list(ds.publications.values()),
            ds.citations,
            [JournalMeta("old", 2000, True), JournalMeta("new", 2011, False)],
        )
        got = rank_journals(ds_new, 2012, "if", 1)
        assert [(e.subject_id, e.value) for e in got] == [("old", 0.1), ("new", None)]

    def test_af_undefined_last(self):
        ds = journals_ds({"a": (3, 3), "b": (0, 0)})
        got = rank_journals(ds, 2012, "af")
        assert [(e.subject_id, e.value is None) for e in got] == [("a", False), ("b", True)]

    def test_bad_metric(self):
        with pytest.raises(ValueError):
            rank_journals(journals_ds({"a": (1, 1)}), 2012, "h")


class TestRankResearchers:
    def test_h_order(self, fixture7):
        got = rank_researchers(fixture7, "h")
        assert [(e.subject_id, e.value, e.rank) for e in got] == [("a1", 2, 1), ("a2", 1, 2), ("a3", 1, 2), ("a4", 1, 2)]

    def test_empty(self):
        assert rank_researchers(build_dataset([], [], []), "h") == []

    @pytest.mark.parametrize("seed", range(25))
    def test_asf_equals_h_on_random_datasets(self, seed):
        rnd = random.Random(seed)
        authors = [f"a{i}" for i in range(rnd.randint(1, 8))]
        pubs = [
            PublicationRecord(f"p{i}", "j", 2010, DocType.ARTICLE, tuple(rnd.sample(authors, rnd.randint(1, len(authors)))))
            for i in range(rnd.randint(1, 15))
        ]
        cites = [CitationRecord("x", rnd.choice(pubs).article_id, 2011) for _ in range(rnd.randint(0, 60))]
        ds = build_dataset(pubs, cites, [JournalMeta("j", 2010, True)])
        by_h = rank_researchers(ds, "h")
        by_asf = rank_researchers(ds, "asf")
        assert [(e.subject_id, e.rank) for e in by_h] == [(e.subject_id, e.rank) for e in by_asf]
        for e in rank_researchers(ds, "g"):
            assert e.value == researcher_report(ds, e.subject_id).g


class TestTables:
    def test_af_table(self):
        t = af_table(20, [5, 10, 20, 40])
        assert [r[1] for r in t.rows] == ["20.0", "33.3", "50.0", "66.7"]
        assert len(t.notes) == 1 and "66.6" in t.notes[0]

    def test_af_table_small(self):
        assert af_table(20, [0]).rows == ((0, "0.0"),)
        assert af_table(1, [1]).rows == ((1, "50.0"),)
        assert af_table(1, [1]).notes == ()

    def test_af_table_empty(self):
        with pytest.raises(ValueError):
            af_table(20, [])

    def test_asf_table(self):
        t = asf_table([1, 5, 10, 20, 40, 100])
        assert [r[1] for r in t.rows] == ["50.0", "83.3", "90.9", "95.2", "97.6", "99.0"]
        assert len(t.notes) == 1 and "96.2" in t.notes[0]

    def test_asf_table_small(self):
        assert asf_table([0]).rows == ((0, "0.0"),)
        assert asf_table([3]).rows == ((3, "75.0"),)


class TestCurves:
    def test_af_anchor(self):
        s = af_curve(20, 200)
        assert s.points[5] == (5, 20.0)
        assert s.points[0] == (0, 0.0)
        assert len(s.points) == 201 and "20" in s.label

    def test_larger_b_lower(self):
        y20 = dict(af_curve(20, 50).points)[40]
        y100 = dict(af_curve(100, 50).points)[40]
        assert y20 == pytest.approx(66.67, abs=0.005) and y100 == pytest.approx(28.57, abs=0.005)
        assert all(p20[1] > p100[1] for p20, p100 in zip(af_curve(20, 200).points[1:], af_curve(100, 200).points[1:]))

    @pytest.mark.parametrize("b", [1, 20, 50, 100])
    def test_af_curve_shape(self, b):
        ys = [y for _, y in af_curve(b, 200).points]
        gaps = [y2 - y1 for y1, y2 in zip(ys, ys[1:])]
        assert all(g > 0 for g in gaps)
        assert all(g2 < g1 for g1, g2 in zip(gaps, gaps[1:]))
        assert all(y == pytest.approx(float(af_exact(a, b)), abs=1e-9) for a, y in enumerate(ys))

    def test_asf_curve(self):
        s = asf_curve(100)
        assert s.points[5] == pytest.approx((5, 83.3333333333))
        ys = [y for _, y in s.points]
        gaps = [y2 - y1 for y1, y2 in zip(ys, ys[1:])]
        assert all(y < 100 for y in ys)
        assert all(g > 0 for g in gaps)
        assert all(g2 < g1 for g1, g2 in zip(gaps, gaps[1:]))
        assert all(g == pytest.approx(100 / ((h + 1) * (h + 2)), abs=1e-9) for h, g in enumerate(gaps))

    def test_series_x_strictly_increasing(self):
        with pytest.raises(ValueError):
            Series("bad", ((0, 1.0), (0, 2.0)))

    @pytest.mark.parametrize("args", [(0, 10), (20, 0)])
    def test_af_curve_bad_args(self, args):
        with pytest.raises(ValueError):
            af_curve(*args)


class TestRender:
    def test_table_csv(self):
        assert render(asf_table([1]), "csv") == b"h,asf\n1,50.0\n"

    def test_empty_series_csv(self):
        assert render(Series("nothing"), "csv") == b"label,x,y\n"
        assert render([], "csv") == b"label,x,y\n"

    def test_series_csv(self):
        out = render([af_curve(20, 2)], "csv").decode()
        assert out == "label,x,y\naf b=20,0,0\naf b=20,1,4.7619\naf b=20,2,9.09091\n"

    def test_plain_table(self):
        out = render(af_table(20, [5, 10, 20, 40]), "plain_table").decode()
        assert out == (
            "citations    af\n"
            "---------  ----\n"
            "        5  20.0\n"
            "       10  33.3\n"
            "       20  50.0\n"
            "       40  66.7\n"
        )

    def test_ranking(self):
        entries = [RankingEntry("j2", "af", 200 / 3, 1), RankingEntry("j1", "af", None, 2)]
        assert render(entries, "csv") == b"rank,subject_id,metric,value\n1,j2,af,66.6667\n2,j1,af,undefined\n"
        assert render_ranking([], "csv") == b"rank,subject_id,metric,value\n"
        plain = render(entries).decode().splitlines()
        assert plain[2].split() == ["1", "j2", "af", "66.7"]

    def test_deterministic(self, fixture7):
        a = render(rank_researchers(fixture7, "g"), "plain_table")
        b = render(rank_researchers(fixture7, "g"), "plain_table")
        assert a == b

    def test_bad_format(self):
        with pytest.raises(ValueError):
            render(asf_table([1]), "xlsx")

    def test_rank_counts_undefined(self):
        got = rank_counts({"a": CountPair(0, 0), "b": CountPair(1, 0)}, "af")
        assert [(e.subject_id, e.value) for e in got] == [("b", 100.0), ("a", None)]
