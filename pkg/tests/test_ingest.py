import datetime as dt
import html
import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hansard_scale import fixtures as fx
from hansard_scale.dtm import count_words
from hansard_scale.errors import EmptyFile, MalformedMarkup, NoDateFound
from hansard_scale.ingest import (
    Dialect,
    extract_speaker,
    find_date,
    ingest_directory,
    parse_file,
    parse_markup,
    parse_transcript,
    read_transcript,
)

D = dt.date


def page(body: str, date: str = "2003-05-07") -> str:
    meta = f'<meta name="date" content="{date}">' if date else ""
    return f"<html><head><title>Sitting</title>{meta}</head><body>{body}</body></html>"


def visible_text(markup: str) -> str:
    """Tag-stripping oracle: everything a reader sees in the body."""
    body = re.sub(r"(?is)<head>.*?</head>", " ", markup)
    return " ".join(html.unescape(re.sub(r"<[^>]+>", " ", body)).split())


# -- speaker labels -------------------------------------------------------


def test_plain_honorific():
    s = extract_speaker("Mr. J. Lynch: I move that the Bill be now read.")
    assert s.speaker_raw == "J. Lynch"
    assert s.role is None
    assert s.body == "I move that the Bill be now read."


def test_parenthesised_office():
    s = extract_speaker("Minister for Finance (Mr. C. McCreevy): The figures are as follows.")
    assert (s.speaker_raw, s.role) == ("C. McCreevy", "Minister for Finance")


def test_role_label_kept_for_linkage():
    s = extract_speaker("An Taoiseach: It is proposed to take No. 1.")
    assert (s.speaker_raw, s.role) == ("An Taoiseach", "Taoiseach")


@pytest.mark.parametrize("line", [
    "The Dáil adjourned at 10 p.m.",
    "Question put: That the amendment be made.",
    "Tá: 70; Níl: 65.",
    "The following were the figures: 3 per cent and 4 per cent.",
    "",
    "Deputies: Hear, hear.",
])
def test_not_a_speaker(line):
    assert extract_speaker(line) is None


@pytest.mark.parametrize("line,name", [
    ("Deputy Róisín Shortall: Why?", "Róisín Shortall"),
    ("Dr. Michael Woods: Yes.", "Michael Woods"),
    ("Mr. O'Donoghue: No.", "O'Donoghue"),
    ("Deputy Caoimhghín Ó Caoláin: Agreed.", "Caoimhghín Ó Caoláin"),
    ("Count Plunkett: I second.", "Plunkett"),
])
def test_name_variants(line, name):
    assert extract_speaker(line).speaker_raw == name


@pytest.mark.parametrize("text,day", [
    ("Wednesday, 5 December 2007", D(2007, 12, 5)),
    ("Thursday, 21st January, 1919", D(1919, 1, 21)),
    ("sitting of 2004-06-30", D(2004, 6, 30)),
    ("no date here", None),
    ("31 February 2001", None),
])
def test_find_date(text, day):
    assert find_date(text) == day


# -- files ----------------------------------------------------------------


def test_three_turns_share_title():
    f = parse_markup(page("<h2>Estimates</h2><p>Mr. A. Byrne: One.</p><p>Mr. B. Walsh: Two.</p>"
                          "<p>Mr. C. Burke: Three.</p>"))
    out = parse_file(f)
    assert len(out) == 3
    assert {c.debate_title for c in out} == {"Estimates"}
    assert all(c.date == D(2003, 5, 7) for c in out)


def test_nearest_preceding_heading():
    f = parse_markup(page("<h2>A</h2><p>Mr. A. Byrne: One.</p><p>Mr. B. Walsh: Two.</p>"
                          "<h2>B</h2><p>Mr. C. Burke: Three.</p>"))
    assert [c.debate_title for c in parse_file(f)] == ["A", "A", "B"]


def test_no_date_anywhere():
    f = parse_markup(page("<h2>A</h2><p>Mr. A. Byrne: One.</p>", date=""))
    with pytest.raises(NoDateFound):
        parse_file(f)


def test_manifest_date_wins():
    f = parse_markup(page("<p>Mr. A. Byrne: One.</p>"), sitting_date=D(1999, 1, 1))
    assert parse_file(f)[0].date == D(1999, 1, 1)


def test_date_from_title_or_first_blocks():
    f = parse_markup("<html><body><p>Thursday, 21st January, 1919</p><p>Mr. A. Byrne: One.</p></body></html>")
    assert f.sitting_date == D(1919, 1, 21)


def test_empty_file(tmp_path):
    path = tmp_path / "blank.html"
    path.write_bytes(b"  \n")
    with pytest.raises(EmptyFile):
        read_transcript(path)


@pytest.mark.parametrize("markup", [
    page("<p>Mr. A. Byrne: One.</p><p class='x"),
    page("</p></p></p><p>Mr. A. Byrne: One.</p>"),
])
def test_malformed(markup):
    with pytest.raises(MalformedMarkup):
        parse_markup(markup)


def test_unclosed_paragraphs_recovered():
    f = parse_markup(page("<h2>A<p>Mr. A. Byrne: One.<p>Mr. B. Walsh: Two."))
    assert [c.speaker_raw for c in parse_file(f)] == ["A. Byrne", "B. Walsh"]


def test_latin1_fallback(tmp_path):
    path = tmp_path / "old.html"
    path.write_bytes(page("<h2>Ceist</h2><p>Mr. S. Ó Ceallaigh: Tá sé.</p>").encode("latin-1"))
    f, fallback = read_transcript(path)
    assert fallback
    assert parse_file(f)[0].speaker_raw == "S. Ó Ceallaigh"


def test_procedural_and_interjections_dropped_and_counted():
    body = ("<h2>A</h2><p>Mr. A. Byrne: One two.</p><p><i>Interruptions.</i></p>"
            "<p>Three four.</p><p class='procedural'>Sitting suspended.</p>")
    result = parse_transcript(parse_markup(page(body)))
    (c,) = result.contributions
    assert c.text == "One two.\nThree four."
    assert c.word_count == count_words(c.text) == 4
    assert result.dropped == 2


def test_empty_turn_is_procedural_row():
    (c,) = parse_file(parse_markup(page("<h2>A</h2><p>Mr. A. Byrne:</p>")))
    assert c.procedural and c.text == ""


def test_custom_dialect():
    dialect = Dialect(heading_tags=frozenset({"div"}), paragraph_tags=frozenset({"span"}))
    f = parse_markup(page("<div>Topic</div><span>Mr. A. Byrne: One.</span>"), dialect=dialect)
    (c,) = parse_file(f)
    assert (c.debate_title, c.speaker_raw) == ("Topic", "A. Byrne")


def test_fixture_sittings_text_conservation():
    for rel, markup in fx.transcript_files().items():
        result = parse_transcript(parse_markup(markup, rel))
        rebuilt = " ".join(text for _, text in result.segments)
        assert " ".join(rebuilt.split()) == visible_text(markup), rel


def test_idempotent_and_ordered():
    markup = fx.transcript_files()["2007/dail-2007-12-06.html"]
    a = parse_file(parse_markup(markup))
    b = parse_file(parse_markup(markup))
    assert a == b
    labels = [sp.label for sp, _ in fx.debate_fixture() if sp.sitting == D(2007, 12, 6)]
    turns = [c for c in a if c.debate_title.startswith(fx.BUDGET_DEBATE_TITLE)]
    assert [c.role or c.speaker_raw for c in turns][0] == "Taoiseach"
    assert len(turns) == len(labels)


def test_directory_ingest(transcript_dir):
    out, report = ingest_directory(transcript_dir)
    assert report.files == report.parsed == 5
    assert report.errors == []
    assert [c.contribution_id for c in out] == list(range(1, len(out) + 1))
    first = [c for c in out if c.date == D(1919, 1, 21)]
    assert len(first) == 3
    assert first[2].text.endswith("be heard.")


def test_directory_ingest_thread_independent(transcript_dir, monkeypatch):
    one, _ = ingest_directory(transcript_dir, threads=1)
    monkeypatch.setenv("HANSARD_SCALE_THREADS", "4")
    many, _ = ingest_directory(transcript_dir)
    assert one == many


def test_directory_errors_are_reported(tmp_path):
    (tmp_path / "good.html").write_text(page("<p>Mr. A. Byrne: One.</p>"), encoding="utf-8")
    (tmp_path / "nodate.html").write_text(page("<p>Mr. A. Byrne: One.</p>", date=""), encoding="utf-8")
    (tmp_path / "empty.html").write_bytes(b"")
    out, report = ingest_directory(tmp_path)
    assert len(out) == 1
    assert sorted(e["error"] for e in report.errors) == ["EmptyFile", "NoDateFound"]


_word = st.text(alphabet="abcdefghij", min_size=1, max_size=6)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(["Mr. A. Byrne", "Deputy Mary Walsh", "An Taoiseach"]),
                          st.lists(st.lists(_word, min_size=1, max_size=8), min_size=1, max_size=3)),
                min_size=1, max_size=6))
def test_turns_round_trip(turns):
    body = "<h2>Debate</h2>"
    for label, paras in turns:
        body += f"<p>{label}: {' '.join(paras[0])}</p>" + "".join(f"<p>{' '.join(p)}</p>" for p in paras[1:])
    out = parse_file(parse_markup(page(body)))
    assert len(out) == len(turns)
    for c, (_, paras) in zip(out, turns):
        assert c.text == "\n".join(" ".join(p) for p in paras)
