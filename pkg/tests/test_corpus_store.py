import datetime as dt
import threading
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hansard_scale import fixtures as fx
from hansard_scale.corpus_store import (
    Contribution,
    CorpusQuery,
    CorpusStore,
    Member,
    export_tsv,
    read_contributions_tsv,
    read_members_tsv,
    write_members_tsv,
)
from hansard_scale.errors import DuplicateId, InvariantViolation, StoreUnavailable

D = dt.date


def contrib(speaker="Mr. A. Test", text="one two three", day=D(2000, 1, 1), **kw):
    return Contribution.from_text(speaker, "Some Debate", day, text, **kw)


def test_sequential_ids(store):
    store.insert_many([contrib(), contrib(), contrib()])
    assert len(store) == 3
    assert store.insert_contribution(contrib()) == 4


def test_word_count_mismatch_names_field(store):
    bad = Contribution("X", "T", D(2000, 1, 1), "three words here", 5)
    with pytest.raises(InvariantViolation) as err:
        store.insert_contribution(bad)
    assert err.value.field == "word_count"


def test_duplicate_id(store):
    store.insert_contribution(contrib(contribution_id=7))
    with pytest.raises(DuplicateId):
        store.insert_contribution(contrib(contribution_id=7))


def test_id_below_max_rejected(store):
    store.insert_contribution(contrib(contribution_id=7))
    with pytest.raises(InvariantViolation):
        store.insert_contribution(contrib(contribution_id=3))


@pytest.mark.parametrize("day", [D(1918, 12, 31), D(2013, 3, 29)])
def test_date_outside_corpus(store, day):
    with pytest.raises(InvariantViolation) as err:
        store.insert_contribution(contrib(day=day))
    assert err.value.field == "date"


def test_empty_text_only_when_procedural(store):
    with pytest.raises(InvariantViolation):
        store.insert_contribution(contrib(text=""))
    store.insert_contribution(contrib(text="", procedural=True))


def test_member_invariants():
    with pytest.raises(InvariantViolation):
        Member("m1", "Name", active_from=D(2000, 1, 2), active_to=D(2000, 1, 1))
    with pytest.raises(InvariantViolation):
        Member("m1", "  ")


def test_empty_query_returns_all(store):
    store.insert_many(fx.store_fixture())
    assert len(store.query(CorpusQuery())) == 12


def test_single_day_filter_matches_linear_scan(store):
    rows = fx.store_fixture()
    store.insert_many(rows)
    day = D(1919, 1, 21)
    got = store.query(CorpusQuery(date_from=day, date_to=day))
    expected = [c for c in rows if c.date == day]
    assert len(got) == 3
    assert [c.contribution_id for c in got] == [c.contribution_id for c in expected]


def test_reversed_interval_rejected():
    with pytest.raises(ValueError):
        CorpusQuery(date_from=D(2001, 1, 1), date_to=D(2000, 1, 1))


def test_filters_combine(store):
    store.upsert_members(fx.register())
    store.insert_many(fx.store_fixture())
    store.set_member_ids(fx.store_fixture_links())
    assert {c.speaker_raw for c in store.query(CorpusQuery(parties={"PD"}))} == {"Mary Harney", "Michael McDowell"}
    q = CorpusQuery.year(2004, title_contains="leaders'")
    assert [c.speaker_raw for c in store.query(q)] == ["Bertie Ahern", "Enda Kenny"]
    assert len(store.query(CorpusQuery(speaker_contains="O'KELLY"))) == 2
    assert store.query(CorpusQuery(member_ids=frozenset())) == []


def test_query_ordering_by_date_then_id(store):
    store.insert_many([contrib(day=D(2001, 1, 1)), contrib(day=D(2000, 1, 1)), contrib(day=D(2000, 1, 1))])
    ids = [c.contribution_id for c in store.query()]
    assert ids == [2, 3, 1]
    assert ids == [c.contribution_id for c in store.query()]


def test_summary_additivity(store):
    store.insert_many([contrib(text="a b c", member_id="m1"), contrib(text="a b c d", member_id="m1")])
    (s,) = store.summarize_by_member()
    assert (s.member_id, s.contribution_count, s.total_word_count) == ("m1", 2, 7)


def test_summary_empty_store(store):
    assert store.summarize_by_member() == []


def test_summary_unlinked_sentinel_and_partition(store):
    store.insert_many([contrib(member_id="m1"), contrib(), contrib(text="x y", member_id="m2")])
    summary = store.summarize_by_member()
    assert sum(s.contribution_count for s in summary) == len(store.query())
    assert any(s.member_id is None for s in summary)


def test_cabinet_table_counts(store):
    names = ["Noel Dempsey", "Micheál Martin"]
    store.insert_many(fx.cabinet_contributions(names))
    top = store.summarize_by_member()
    assert (top[0].member_id, top[0].contribution_count, top[0].total_word_count) == \
        (fx.member_id("Noel Dempsey"), 8066, 1273835)
    assert (top[1].contribution_count, top[1].total_word_count) == (789, 141721)


def test_round_trip_by_id(store):
    c = contrib(text="Tá sé\tag cur\nbáistí \\ inniu", role="Taoiseach", member_id="m9")
    cid = store.insert_contribution(c)
    assert store.get(cid) == replace(c, contribution_id=cid)


def test_tsv_round_trip(store, tmp_path):
    store.upsert_members(fx.register())
    rows = fx.store_fixture()
    rows[0] = contrib("Cathal Brugha", "line one\nline\ttwo \\ three", D(1919, 1, 21),
                      member_id="brugha-cathal", contribution_id=1)
    store.insert_many(rows)
    path = tmp_path / "c.tsv"
    export_tsv(store, path)
    raw = path.read_bytes()
    assert b"\r\n" not in raw
    assert raw.splitlines()[0].decode() == "\t".join(
        ["contribution_id", "speaker_raw", "member_id", "party", "constituency",
         "debate_title", "date", "word_count", "text"])
    back = read_contributions_tsv(path)
    assert [c.text for c in back] == [c.text for c in store.query()]
    assert back[0].member_id == "brugha-cathal"
    with CorpusStore() as other:
        other.upsert_members(fx.register())
        other.insert_many(back)
        export_tsv(other, tmp_path / "d.tsv")
    assert (tmp_path / "d.tsv").read_bytes() == raw


def test_members_tsv_round_trip(tmp_path):
    write_members_tsv(fx.register(), tmp_path / "m.tsv")
    assert read_members_tsv(tmp_path / "m.tsv") == fx.register()


def test_closed_store_unavailable():
    s = CorpusStore()
    s.close()
    with pytest.raises(StoreUnavailable):
        s.query()


def test_file_store_persists(tmp_path):
    path = tmp_path / "corpus.sqlite"
    with CorpusStore(path) as s:
        s.insert_many(fx.store_fixture())
    with CorpusStore(path) as s:
        assert len(s) == 12


def test_concurrent_writers_serialised(store):
    def writer():
        for _ in range(20):
            store.insert_contribution(contrib())

    threads = [threading.Thread(target=writer) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    ids = [c.contribution_id for c in store.query()]
    assert sorted(ids) == list(range(1, 81))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(["m1", "m2", "m3", None]), st.integers(1, 30),
                          st.dates(D(1919, 1, 21), D(2013, 3, 28))), max_size=25),
       st.sampled_from([None, 1950, 2000]))
def test_partition_property(rows, year):
    with CorpusStore() as s:
        s.insert_many([contrib(text=" ".join(["w"] * n), day=day, member_id=m) for m, n, day in rows])
        q = CorpusQuery.year(year) if year else CorpusQuery()
        result = s.query(q)
        summary = s.summarize_by_member(q)
        assert sum(x.contribution_count for x in summary) == len(result)
        assert sum(x.total_word_count for x in summary) == sum(c.word_count for c in result)
        words = [x.total_word_count for x in summary]
        assert words == sorted(words, reverse=True)
