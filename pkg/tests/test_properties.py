from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import af_exact, asf_exact, g_oracle, h_oracle

from citemet.metrics import CountPair, af_score, asf_score, g_index, h_index, impact_factor
from citemet.report import dense_rank, rank_counts, rank_h_values

counts = st.lists(st.integers(0, 100), max_size=50)


@given(counts)
def test_h_matches_oracle(cs):
    assert h_index(cs) == h_oracle(cs)


@given(counts)
def test_g_matches_oracle(cs):
    assert g_index(cs) == g_oracle(cs)


@given(counts)
def test_g_at_least_h(cs):
    assert g_index(cs) >= h_index(cs)


@given(counts, st.randoms(use_true_random=False))
def test_permutation_invariance(cs, rnd):
    shuffled = list(cs)
    rnd.shuffle(shuffled)
    assert h_index(shuffled) == h_index(cs)
    assert g_index(shuffled) == g_index(cs)


@given(counts, st.integers(0, 100))
def test_appending_never_decreases(cs, extra):
    assert h_index(cs + [extra]) >= h_index(cs)
    assert g_index(cs + [extra]) >= g_index(cs)


@given(counts.filter(bool), st.data())
def test_incrementing_never_decreases(cs, data):
    i = data.draw(st.integers(0, len(cs) - 1))
    bumped = list(cs)
    bumped[i] += 1
    assert h_index(bumped) >= h_index(cs)
    assert g_index(bumped) >= g_index(cs)


@given(st.integers(0, 10**6), st.integers(1, 10**6))
def test_af_identity(a, b):
    r = a / b
    assert abs(af_score(CountPair(a, b)) - 100 * r / (1 + r)) <= 1e-9


@given(st.integers(0, 10**6), st.integers(0, 10**6).filter(bool) | st.just(0))
def test_af_range(a, b):
    if a + b == 0:
        return
    af = af_score(CountPair(a, b))
    assert 0 <= af <= 100
    assert (af == 0) == (a == 0)
    assert (af == 100) == (b == 0)


@given(st.integers(0, 10**4), st.integers(1, 10**4))
def test_af_monotone_in_a_with_shrinking_gain(a, b):
    f = [af_score(CountPair(a + k, b)) for k in range(3)]
    assert f[0] < f[1] < f[2]
    assert f[2] - f[1] < f[1] - f[0]
    assert af_exact(a + 1, b) - af_exact(a, b) == Fraction(100 * b, (a + b) * (a + b + 1))


@given(st.integers(1, 10**4), st.integers(0, 10**4))
def test_af_decreasing_in_b(a, b):
    assert af_score(CountPair(a, b)) > af_score(CountPair(a, b + 1))


@given(st.integers(0, 10**6))
def test_asf_monotone_bounded(h):
    assert asf_score(h) < asf_score(h + 1) < 100
    assert asf_exact(h + 1) - asf_exact(h) == Fraction(100, (h + 1) * (h + 2))


@given(st.dictionaries(st.text("abcdef", min_size=1, max_size=4), st.tuples(st.integers(0, 60), st.integers(1, 60)), max_size=12))
def test_af_and_one_year_if_rank_alike(raw):
    pairs = {k: CountPair(a, b) for k, (a, b) in raw.items()}
    by_af = rank_counts(pairs, "af")
    by_if = rank_counts(pairs, "if")
    assert [(e.subject_id, e.rank) for e in by_af] == [(e.subject_id, e.rank) for e in by_if]


@given(st.dictionaries(st.text("xyz", min_size=1, max_size=3), st.integers(0, 50), max_size=12))
def test_asf_and_h_rank_alike(hs):
    assert [(e.subject_id, e.rank) for e in rank_h_values(hs, "asf")] == [
        (e.subject_id, e.rank) for e in rank_h_values(hs, "h")
    ]


@given(st.dictionaries(st.text(min_size=1, max_size=3), st.one_of(st.none(), st.integers(-5, 5)), max_size=15))
def test_dense_rank_properties(values):
    entries = dense_rank(values, "h")
    assert sorted(e.subject_id for e in entries) == sorted(values)
    ranks = [e.rank for e in entries]
    assert ranks == sorted(ranks)
    if entries:
        assert ranks[0] == 1
    for x, y in zip(entries, entries[1:]):
        assert y.rank - x.rank in (0, 1)
        assert (x.value == y.value) == (x.rank == y.rank)
        if x.value is not None and y.value is not None:
            assert x.value > y.value or (x.value == y.value and x.subject_id < y.subject_id)
        assert not (x.value is None and y.value is not None)


@settings(max_examples=50)
@given(st.integers(1, 10**3), st.integers(1, 10**3))
def test_if_exact_for_multiples(k, b):
    assert impact_factor(CountPair(k * b, b)) == k
