import datetime as dt
import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hansard_scale import fixtures as fx
from hansard_scale.corpus_store import CorpusQuery, Member
from hansard_scale.errors import BothEmpty, DataError, EmptyRegister
from hansard_scale.linkage import (
    AMBIGUOUS,
    MATCHED,
    OVERRIDE,
    UNMATCHED,
    LinkConfig,
    Linker,
    link_contributions,
    link_corpus,
    link_speaker,
    lcs_similarity,
    longest_common_substring,
    name_variants,
    normalize_name,
    read_overrides,
    read_roles,
    write_roles,
)
from oracles import brute_lcs_similarity

D = dt.date


def test_identity():
    assert lcs_similarity("bertie ahern", "bertie ahern") == 1.0


def test_disjoint():
    assert lcs_similarity("abc", "xyz", 2) == 0.0


def test_hand_trace():
    assert longest_common_substring("bertie ahern", "b ahern") == (6, 6, 1)
    assert lcs_similarity("bertie ahern", "b ahern", 2) == pytest.approx(12 / 19, abs=1e-12)
    assert brute_lcs_similarity("bertie ahern", "b ahern", 2) == Fraction(12, 19)


def test_both_empty():
    with pytest.raises(BothEmpty):
        lcs_similarity("", "")
    assert lcs_similarity("", "abc") == 0.0


def test_min_common_len_floor():
    assert lcs_similarity("ab", "ba", 2) == 0.0
    assert lcs_similarity("ab", "ba", 1) == 1.0


def test_leftmost_tie_rule():
    # "ab" and "cd" both length 2; "ab" is leftmost in the first string
    assert longest_common_substring("abxcd", "cdyab") == (2, 0, 3)


def test_exhaustive_short_strings_match_oracle():
    strings = ["".join(p) for n in range(0, 5) for p in itertools.product("abc", repeat=n)]
    for a, b in itertools.product(strings, repeat=2):
        if a or b:
            assert lcs_similarity(a, b) == float(brute_lcs_similarity(a, b)), (a, b)


def test_random_long_strings_match_oracle():
    rng = random.Random(7)
    for _ in range(3000):
        a = "".join(rng.choice("abc") for _ in range(rng.randint(0, 12)))
        b = "".join(rng.choice("abc") for _ in range(rng.randint(1, 12)))
        assert lcs_similarity(a, b) == float(brute_lcs_similarity(a, b)), (a, b)


_s = st.text(alphabet="abc ", max_size=14)


@settings(max_examples=300)
@given(_s, _s)
def test_symmetric_and_bounded(a, b):
    if not (a or b):
        return
    s = lcs_similarity(a, b)
    assert s == lcs_similarity(b, a)
    assert 0.0 <= s <= 1.0
    assert (s == 1.0) == (a == b)


@settings(max_examples=200)
@given(st.text(alphabet="abc", min_size=1, max_size=10), st.text(alphabet="abc", min_size=1, max_size=5))
def test_self_containment_below_one(a, suffix):
    assert lcs_similarity(a, a + suffix) < 1.0


def test_normalize_name():
    assert normalize_name("Mr. Éamon Ó Cuív") == "eamon o cuiv"
    assert normalize_name("Deputy  Leas-Cheann") == "leas cheann"
    assert normalize_name("Mr.") == "mr"


def test_variants():
    assert name_variants("Bertie Ahern") == ("bertie ahern", "b ahern")
    assert "e o cuiv" in name_variants("Éamon Ó Cuív")
    assert "charles j haughey" in name_variants("Haughey, Charles J.")


# -- linking ----------------------------------------------------------------

REG = [
    Member("m1", "Bertie Ahern", "FF", "Dublin Central"),
    Member("m2", "Enda Kenny", "FG", "Mayo"),
    Member("m3", "Richard Bruton", "FG", "Dublin North Central"),
]


def test_initials_match_unique_surname():
    res = link_speaker("mr. b. ahern", D(2000, 1, 1), REG)
    assert (res.status, res.best_member_id) == (MATCHED, "m1")


def test_match_is_exhaustive_argmax():
    linker = Linker(REG)
    query = normalize_name("mr. b. ahern")
    scores = {m.member_id: max(lcs_similarity(query, v) for v in name_variants(m.canonical_name)) for m in REG}
    assert linker.link("mr. b. ahern").best_member_id == max(scores, key=scores.get)


def test_below_threshold_unmatched():
    res = link_speaker("Zed Quinlivan", D(2000, 1, 1), REG)
    assert res.status == UNMATCHED and res.best_member_id is None
    assert res.similarity < 0.8


def test_accent_tie_is_ambiguous():
    reg = [Member("r1", "Seán Ryan"), Member("r2", "Sean Ryan")]
    res = link_speaker("sean ryan", D(2000, 1, 1), reg)
    assert res.status == AMBIGUOUS
    assert res.candidates == ("r1", "r2")


def test_empty_register():
    with pytest.raises(EmptyRegister):
        link_speaker("x", None, [])


def test_date_window_excludes_inactive():
    reg = [Member("old", "John Kelly", active_from=D(1920, 1, 1), active_to=D(1930, 1, 1)),
           Member("new", "John Kelly", active_from=D(1990, 1, 1))]
    assert link_speaker("John Kelly", D(1995, 1, 1), reg).best_member_id == "new"
    assert link_speaker("John Kelly", D(1995, 1, 1), reg, LinkConfig(date_window=False)).status == AMBIGUOUS


def test_role_resolved_by_date():
    roles = fx.role_holdings()
    reg = fx.register()
    assert link_speaker("An Taoiseach", D(2007, 12, 6), reg, roles=roles).best_member_id == "ahern-bertie"
    assert link_speaker("An Taoiseach", D(2009, 1, 1), reg, roles=roles).best_member_id == "cowen-brian"


def test_config_invariants():
    with pytest.raises(ValueError):
        LinkConfig(threshold=0.0)
    with pytest.raises(ValueError):
        LinkConfig(min_common_len=1)


@settings(max_examples=25, deadline=None)
@given(st.randoms(use_true_random=False))
def test_register_order_irrelevant(rnd):
    reg = fx.register()
    shuffled = reg[:]
    rnd.shuffle(shuffled)
    for name in ["Mr. B. Ahern", "Deputy Michael Ahern", "Sean Ryan", "Count Plunkett", "Mary Harney"]:
        a = link_speaker(name, D(2004, 1, 1), reg)
        b = link_speaker(name, D(2004, 1, 1), shuffled)
        assert a == b


def test_clean_store_fixture_all_matched(store, register):
    store.insert_many(fx.store_fixture())
    report = link_corpus(store, register)
    assert report.counts[MATCHED] == 12 and report.counts[UNMATCHED] == 0
    linked = {c.contribution_id: c.member_id for c in store.query()}
    assert linked == fx.store_fixture_links()


def test_misspelled_name_unmatched_and_listed(store, register):
    store.insert_many(fx.store_fixture(misspell=True))
    report = link_corpus(store, register)
    assert report.counts[MATCHED] == 11 and report.counts[UNMATCHED] == 1
    (row,) = report.review()
    assert row.speaker_raw == fx.MISSPELLED_SPEAKER[1]
    assert fx.MISSPELLED_SPEAKER[1] in report.review_tsv()
    assert store.get(row.contribution_id).member_id is None
    assert len(store.query(CorpusQuery(member_ids={"harney-mary"}))) == 0


def test_overrides_round_trip(store, register, tmp_path):
    store.insert_many(fx.store_fixture(misspell=True))
    report = link_corpus(store, register)
    path = tmp_path / "overrides.tsv"
    path.write_text(report.review_tsv().replace("\t\n", "\tharney-mary\n"), encoding="utf-8")
    report = link_corpus(store, register, overrides=read_overrides(path))
    assert report.counts[OVERRIDE] == 1 and report.linked == 12


def test_override_to_unknown_member(register):
    with pytest.raises(DataError):
        link_contributions(fx.store_fixture(), register, overrides={"Mary Harney": "nobody"})


def test_roles_file_round_trip(tmp_path):
    write_roles(fx.role_holdings(), tmp_path / "roles.tsv")
    assert read_roles(tmp_path / "roles.tsv") == fx.role_holdings()


def test_demo_transcripts_fully_linked(transcript_dir, register):
    from hansard_scale.ingest import ingest_directory

    contributions, _ = ingest_directory(transcript_dir)
    report = link_contributions(contributions, register, roles=fx.role_holdings())
    assert report.linked == len(contributions)
    assert report.to_tsv().count("\n") == len(contributions) + 1
