"""Relational storage of contributions joined to the members register.

On-disk layout (one SQLite file, schema version 1)::

    members(member_id TEXT PK, canonical_name, party, constituency,
            active_from DATE, active_to DATE NULL)
    contributions(contribution_id INTEGER PK, speaker_raw, member_id NULL,
                  role NULL, debate_title, date DATE, text, word_count,
                  procedural INTEGER)

Dates are ISO-8601 strings, so lexical order is calendar order. The TSV
exchange format is documented on :func:`export_tsv`.
"""

from __future__ import annotations

import datetime as dt
import sqlite3
import threading
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Iterator, Optional

from .dtm import count_words
from .errors import DataError, DuplicateId, InvariantViolation, StoreUnavailable

CORPUS_START = dt.date(1919, 1, 21)
CORPUS_END = dt.date(2013, 3, 28)
SCHEMA_VERSION = 1

TSV_COLUMNS = (
    "contribution_id",
    "speaker_raw",
    "member_id",
    "party",
    "constituency",
    "debate_title",
    "date",
    "word_count",
    "text",
)

MEMBER_COLUMNS = ("member_id", "canonical_name", "party", "constituency", "active_from", "active_to")


@dataclass(frozen=True)
class Member:
    member_id: str
    canonical_name: str
    party: str = ""
    constituency: str = ""
    active_from: dt.date = CORPUS_START
    active_to: Optional[dt.date] = None  # None: still serving

    def __post_init__(self):
        if not self.member_id:
            raise InvariantViolation("member_id", "must be non-empty")
        if not self.canonical_name.strip():
            raise InvariantViolation("canonical_name", f"empty for member {self.member_id}")
        if self.active_to is not None and self.active_from > self.active_to:
            raise InvariantViolation(
                "active_from", f"{self.active_from} after active_to {self.active_to} ({self.member_id})"
            )

    def active_on(self, day: dt.date) -> bool:
        return self.active_from <= day and (self.active_to is None or day <= self.active_to)


@dataclass(frozen=True)
class Contribution:
    speaker_raw: str
    debate_title: str
    date: dt.date
    text: str
    word_count: int
    member_id: Optional[str] = None
    contribution_id: Optional[int] = None
    role: Optional[str] = None
    procedural: bool = False

    @classmethod
    def from_text(cls, speaker_raw: str, debate_title: str, date: dt.date, text: str, **kw) -> "Contribution":
        return cls(speaker_raw, debate_title, date, text, count_words(text), **kw)

    def validate(self, start: dt.date = CORPUS_START, end: dt.date = CORPUS_END) -> None:
        if not isinstance(self.date, dt.date):
            raise InvariantViolation("date", f"not a calendar date: {self.date!r}")
        if not start <= self.date <= end:
            raise InvariantViolation("date", f"{self.date} outside corpus range {start}..{end}")
        if self.word_count < 0:
            raise InvariantViolation("word_count", "negative")
        actual = count_words(self.text)
        if self.word_count != actual:
            raise InvariantViolation(
                "word_count", f"declared {self.word_count} but text has {actual} words"
            )
        if not self.text.strip() and not self.procedural:
            raise InvariantViolation("text", "empty text on a non-procedural contribution")
        if not self.speaker_raw.strip():
            raise InvariantViolation("speaker_raw", "empty")


@dataclass(frozen=True)
class CorpusQuery:
    member_ids: frozenset[str] | None = None
    parties: frozenset[str] | None = None
    date_from: dt.date | None = None
    date_to: dt.date | None = None
    title_contains: str | None = None
    speaker_contains: str | None = None

    def __post_init__(self):
        if self.date_from and self.date_to and self.date_from > self.date_to:
            raise ValueError(f"date interval reversed: {self.date_from} > {self.date_to}")
        for name in ("member_ids", "parties"):
            value = getattr(self, name)
            if value is not None and not isinstance(value, frozenset):
                object.__setattr__(self, name, frozenset(value))

    @classmethod
    def year(cls, year: int, **kw) -> "CorpusQuery":
        return cls(date_from=dt.date(year, 1, 1), date_to=dt.date(year, 12, 31), **kw)


@dataclass(frozen=True)
class MemberSummary:
    member_id: Optional[str]  # None groups unlinked rows
    contribution_count: int
    total_word_count: int


UNLINKED = None

_SCHEMA = """
CREATE TABLE IF NOT EXISTS meta (key TEXT PRIMARY KEY, value TEXT NOT NULL);
CREATE TABLE IF NOT EXISTS members (
    member_id      TEXT PRIMARY KEY,
    canonical_name TEXT NOT NULL,
    party          TEXT NOT NULL DEFAULT '',
    constituency   TEXT NOT NULL DEFAULT '',
    active_from    TEXT NOT NULL,
    active_to      TEXT
);
CREATE TABLE IF NOT EXISTS contributions (
    contribution_id INTEGER PRIMARY KEY,
    speaker_raw     TEXT NOT NULL,
    member_id       TEXT,
    role            TEXT,
    debate_title    TEXT NOT NULL,
    date            TEXT NOT NULL,
    text            TEXT NOT NULL,
    word_count      INTEGER NOT NULL,
    procedural      INTEGER NOT NULL DEFAULT 0
);
CREATE INDEX IF NOT EXISTS contributions_date ON contributions(date, contribution_id);
CREATE INDEX IF NOT EXISTS contributions_member ON contributions(member_id);
"""


def _casefold(value):
    return value.casefold() if value is not None else None


class CorpusStore:
    """Single-file contribution store. ``path=":memory:"`` keeps it in RAM.

    All access goes through one connection guarded by a lock, which
    serialises writers and keeps readers from seeing partial batches.
    """

    def __init__(self, path: str | Path = ":memory:", start: dt.date = CORPUS_START, end: dt.date = CORPUS_END):
        self.path = str(path)
        self.start, self.end = start, end
        self._lock = threading.RLock()
        try:
            self._conn = sqlite3.connect(self.path, check_same_thread=False)
        except sqlite3.Error as exc:
            raise StoreUnavailable(f"cannot open store {self.path}: {exc}") from exc
        self._conn.create_function("casefold", 1, _casefold, deterministic=True)
        with self._conn:
            self._conn.executescript(_SCHEMA)
            self._conn.execute(
                "INSERT OR IGNORE INTO meta(key, value) VALUES ('schema_version', ?)", (str(SCHEMA_VERSION),)
            )

    # -- lifecycle --------------------------------------------------------
    def close(self) -> None:
        with self._lock:
            if self._conn is not None:
                self._conn.close()
                self._conn = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def _db(self) -> sqlite3.Connection:
        if self._conn is None:
            raise StoreUnavailable(f"store {self.path} is closed")
        return self._conn

    def __len__(self) -> int:
        with self._lock:
            return self._db().execute("SELECT COUNT(*) FROM contributions").fetchone()[0]

    # -- members ----------------------------------------------------------
    def upsert_members(self, members: Iterable[Member]) -> None:
        rows = [
            (m.member_id, m.canonical_name, m.party, m.constituency, m.active_from.isoformat(),
             m.active_to.isoformat() if m.active_to else None)
            for m in members
        ]
        with self._lock, self._db() as conn:
            conn.executemany("INSERT OR REPLACE INTO members VALUES (?,?,?,?,?,?)", rows)

    def members(self) -> list[Member]:
        with self._lock:
            rows = self._db().execute("SELECT * FROM members ORDER BY member_id").fetchall()
        return [
            Member(r[0], r[1], r[2], r[3], dt.date.fromisoformat(r[4]),
                   dt.date.fromisoformat(r[5]) if r[5] else None)
            for r in rows
        ]

    # -- contributions ----------------------------------------------------
    def insert_contribution(self, c: Contribution) -> int:
        return self.insert_many([c])[0]

    def insert_many(self, contributions: Iterable[Contribution]) -> list[int]:
        """Insert a batch atomically; ids are assigned max+1 where absent."""
        ids = []
        with self._lock, self._db() as conn:
            (current,) = conn.execute("SELECT COALESCE(MAX(contribution_id), 0) FROM contributions").fetchone()
            rows = []
            for c in contributions:
                c.validate(self.start, self.end)
                if c.contribution_id is None:
                    cid = current + 1
                else:
                    cid = int(c.contribution_id)
                    if cid <= current:
                        exists = conn.execute(
                            "SELECT 1 FROM contributions WHERE contribution_id = ?", (cid,)
                        ).fetchone()
                        if exists or cid in ids:
                            raise DuplicateId(f"contribution_id {cid} already stored")
                        raise InvariantViolation(
                            "contribution_id", f"{cid} is not above the current maximum {current}"
                        )
                current = cid
                ids.append(cid)
                rows.append((cid, c.speaker_raw, c.member_id, c.role, c.debate_title,
                             c.date.isoformat(), c.text, c.word_count, int(c.procedural)))
            conn.executemany("INSERT INTO contributions VALUES (?,?,?,?,?,?,?,?,?)", rows)
        return ids

    def get(self, contribution_id: int) -> Contribution:
        with self._lock:
            row = self._db().execute(
                "SELECT * FROM contributions WHERE contribution_id = ?", (contribution_id,)
            ).fetchone()
        if row is None:
            raise KeyError(contribution_id)
        return _row_to_contribution(row)

    def set_member_ids(self, links: dict[int, Optional[str]]) -> None:
        with self._lock, self._db() as conn:
            conn.executemany(
                "UPDATE contributions SET member_id = ? WHERE contribution_id = ?",
                [(mid, cid) for cid, mid in sorted(links.items())],
            )

    def _where(self, q: CorpusQuery) -> tuple[str, list]:
        clauses, params = [], []
        if q.member_ids is not None:
            ids = sorted(q.member_ids)
            clauses.append(f"c.member_id IN ({','.join('?' * len(ids))})" if ids else "0")
            params += ids
        if q.parties is not None:
            parties = sorted(q.parties)
            clauses.append(f"m.party IN ({','.join('?' * len(parties))})" if parties else "0")
            params += parties
        if q.date_from is not None:
            clauses.append("c.date >= ?")
            params.append(q.date_from.isoformat())
        if q.date_to is not None:
            clauses.append("c.date <= ?")
            params.append(q.date_to.isoformat())
        if q.title_contains:
            clauses.append("instr(casefold(c.debate_title), casefold(?)) > 0")
            params.append(q.title_contains)
        if q.speaker_contains:
            clauses.append("instr(casefold(c.speaker_raw), casefold(?)) > 0")
            params.append(q.speaker_contains)
        return (" WHERE " + " AND ".join(clauses)) if clauses else "", params

    def query(self, q: CorpusQuery | None = None) -> list[Contribution]:
        """Rows matching every filter in ``q``, ordered by (date, contribution_id)."""
        where, params = self._where(q or CorpusQuery())
        sql = (
            "SELECT c.* FROM contributions c LEFT JOIN members m ON c.member_id = m.member_id"
            f"{where} ORDER BY c.date, c.contribution_id"
        )
        with self._lock:
            rows = self._db().execute(sql, params).fetchall()
        return [_row_to_contribution(r) for r in rows]

    def iter_all(self) -> Iterator[Contribution]:
        yield from self.query()

    def summarize_by_member(self, q: CorpusQuery | None = None) -> list[MemberSummary]:
        """Per-member counts and word totals, sorted by total word count (descending).

        Unlinked rows are grouped under ``member_id=None``.
        """
        where, params = self._where(q or CorpusQuery())
        sql = (
            "SELECT c.member_id, COUNT(*), SUM(c.word_count) FROM contributions c "
            f"LEFT JOIN members m ON c.member_id = m.member_id{where} GROUP BY c.member_id"
        )
        with self._lock:
            rows = self._db().execute(sql, params).fetchall()
        out = [MemberSummary(mid, n, int(words or 0)) for mid, n, words in rows]
        out.sort(key=lambda s: (-s.total_word_count, s.member_id is None, s.member_id or ""))
        return out

    def export_tsv(self, path: str | Path, q: CorpusQuery | None = None) -> int:
        return export_tsv(self, path, q)


def _row_to_contribution(row) -> Contribution:
    cid, speaker, mid, role, title, date, text, wc, proc = row
    return Contribution(
        speaker_raw=speaker, debate_title=title, date=dt.date.fromisoformat(date), text=text,
        word_count=wc, member_id=mid, contribution_id=cid, role=role, procedural=bool(proc),
    )


# -- TSV exchange ---------------------------------------------------------

_ESCAPES = {"\\": "\\\\", "\t": "\\t", "\n": "\\n", "\r": "\\r"}
_UNESCAPES = {"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}


def escape_field(value: str) -> str:
    return "".join(_ESCAPES.get(ch, ch) for ch in value)


def unescape_field(value: str) -> str:
    if "\\" not in value:
        return value
    out, chars = [], iter(value)
    for ch in chars:
        if ch == "\\":
            nxt = next(chars, "")
            if nxt not in _UNESCAPES:
                raise DataError(f"bad escape sequence \\{nxt} in TSV field")
            out.append(_UNESCAPES[nxt])
        else:
            out.append(ch)
    return "".join(out)


def export_tsv(store: CorpusStore, path: str | Path, q: CorpusQuery | None = None) -> int:
    """Write contributions as UTF-8 TSV with LF endings.

    Columns are ``TSV_COLUMNS``; party and constituency come from the
    members table (empty for unlinked rows). Backslash, tab, CR and LF in
    any field are written as ``\\\\``, ``\\t``, ``\\r`` and ``\\n``.
    """
    members = {m.member_id: m for m in store.members()}
    rows = store.query(q)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(TSV_COLUMNS) + "\n")
        for c in rows:
            m = members.get(c.member_id) if c.member_id else None
            fields = [
                str(c.contribution_id), c.speaker_raw, c.member_id or "",
                m.party if m else "", m.constituency if m else "",
                c.debate_title, c.date.isoformat(), str(c.word_count), c.text,
            ]
            fh.write("\t".join(escape_field(f) for f in fields) + "\n")
    return len(rows)


def read_contributions_tsv(path: str | Path) -> list[Contribution]:
    """Parse a contributions TSV. Party and constituency are derived data and are dropped."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"corpus file not found: {path}")
    with open(path, encoding="utf-8", newline="") as fh:
        lines = fh.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or tuple(lines[0].split("\t")) != TSV_COLUMNS:
        raise DataError(f"{path}: header must be {' '.join(TSV_COLUMNS)}")
    out = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if len(parts) != len(TSV_COLUMNS):
            raise DataError(f"{path}:{lineno}: expected {len(TSV_COLUMNS)} fields, got {len(parts)}")
        rec = dict(zip(TSV_COLUMNS, (unescape_field(p) for p in parts)))
        try:
            out.append(Contribution(
                speaker_raw=rec["speaker_raw"], debate_title=rec["debate_title"],
                date=dt.date.fromisoformat(rec["date"]), text=rec["text"],
                word_count=int(rec["word_count"]), member_id=rec["member_id"] or None,
                contribution_id=int(rec["contribution_id"]),
                procedural=not rec["text"].strip(),
            ))
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: {exc}") from None
    return out


def import_tsv(store: CorpusStore, path: str | Path) -> list[int]:
    return store.insert_many(read_contributions_tsv(path))


def write_members_tsv(members: Iterable[Member], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(MEMBER_COLUMNS) + "\n")
        for m in members:
            fh.write("\t".join([
                m.member_id, m.canonical_name, m.party, m.constituency,
                m.active_from.isoformat(), m.active_to.isoformat() if m.active_to else "",
            ]) + "\n")


def read_members_tsv(path: str | Path) -> list[Member]:
    path = Path(path)
    if not path.exists():
        raise DataError(f"register file not found: {path}")
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or tuple(lines[0].split("\t")) != MEMBER_COLUMNS:
        raise DataError(f"{path}: header must be {' '.join(MEMBER_COLUMNS)}")
    members = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if len(parts) != len(MEMBER_COLUMNS):
            raise DataError(f"{path}:{lineno}: expected {len(MEMBER_COLUMNS)} fields")
        mid, name, party, const, start, end = parts
        try:
            members.append(Member(mid, name, party, const, dt.date.fromisoformat(start),
                                  dt.date.fromisoformat(end) if end else None))
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: {exc}") from None
    if len({m.member_id for m in members}) != len(members):
        raise DataError(f"{path}: member_id values are not unique")
    return members


def with_ids(contributions: Iterable[Contribution], start: int = 1) -> list[Contribution]:
    """Assign sequential ids to contributions that have none."""
    return [replace(c, contribution_id=start + k) for k, c in enumerate(contributions)]
