"""Transcript parsing: headings, sitting dates, speaker turns and body text.

The canonical markup this parser reads::

    <html><head>
      <title>Dáil Éireann - Wednesday, 5 December 2007</title>
      <meta name="date" content="2007-12-05">
    </head><body>
      <h2>Financial Resolution</h2>
      <p>Minister for Finance (Mr. B. Cowen): I move ...</p>
      <p>A continuation paragraph of the same turn.</p>
      <p><i>Question put and agreed to.</i></p>
    </body></html>

Headings open a new debate title, a paragraph that starts with a speaker
label opens a new turn, other paragraphs continue the current turn, and
wholly italic paragraphs (or ``class="procedural"``) are procedural notes
that are dropped. Site-specific markup is handled by passing a different
:class:`Dialect`.
"""

from __future__ import annotations

import datetime as dt
import json
import logging
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from html.parser import HTMLParser
from pathlib import Path
from typing import Optional

from .corpus_store import Contribution
from .dtm import count_words
from .errors import DataError, EmptyFile, MalformedMarkup, NoDateFound
from .titles import TitleTable, default_titles

logger = logging.getLogger(__name__)

TRANSCRIPT_SUFFIXES = (".html", ".htm")


@dataclass(frozen=True)
class Dialect:
    """Tag vocabulary of a transcript markup flavour."""

    heading_tags: frozenset[str] = frozenset({"h1", "h2", "h3", "h4"})
    paragraph_tags: frozenset[str] = frozenset({"p", "li", "blockquote"})
    italic_tags: frozenset[str] = frozenset({"i", "em"})
    procedural_classes: frozenset[str] = frozenset({"procedural", "note"})
    skip_tags: frozenset[str] = frozenset({"script", "style", "head"})


CANONICAL = Dialect()


@dataclass(frozen=True)
class Block:
    kind: str  # "heading" | "para" | "procedural"
    text: str


@dataclass
class TranscriptFile:
    source_path: str
    sitting_date: Optional[dt.date]
    blocks: list[Block]
    title: str = ""


@dataclass(frozen=True)
class SpeakerLabel:
    speaker_raw: str
    role: Optional[str]
    label: str  # the label as printed, without the colon
    body: str


@dataclass
class ParseResult:
    contributions: list[Contribution]
    segments: list[tuple[str, str]]  # (kind, text) in source order
    turns: int = 0
    dropped: int = 0


@dataclass
class ParseReport:
    files: int = 0
    parsed: int = 0
    turns: int = 0
    contributions: int = 0
    dropped: int = 0
    latin1_fallbacks: list[str] = field(default_factory=list)
    errors: list[dict] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# -- speaker labels -------------------------------------------------------

_LABEL = re.compile(r"^\s*(?P<label>[^:\n]{1,120}?)\s*:(?:\s+(?P<body>.*))?$", re.S)
_PAREN = re.compile(r"^(?P<role>[^()]+?)\s*\((?P<inner>[^()]+)\)$")
_PARTICLES = frozenset({"de", "van", "von", "na", "ní", "nic", "mac", "mhic", "ua", "le", "la", "ó", "o'", "di"})
_INITIAL = re.compile(r"^[^\W\d_]\.$")
_NAME_WORD = re.compile(r"^[^\W\d_][^\W\d_'’\-\.]*(?:['’\-\.][^\W\d_]+)*\.?$")


def _name_like(name: str) -> bool:
    words = name.split()
    if not 1 <= len(words) <= 6:
        return False
    for w in words:
        if _INITIAL.match(w):
            continue
        if w.casefold() in _PARTICLES:
            continue
        if not (_NAME_WORD.match(w) and w[0].isupper()):
            return False
    return any(not _INITIAL.match(w) for w in words)


def extract_speaker(line: str, titles: TitleTable | None = None) -> Optional[SpeakerLabel]:
    """Recognise a speaker-turn prefix ``Name: body``.

    Returns None when the line does not open a turn. Honorifics are
    stripped from the name; an office in front of a parenthesised name
    ("Minister for Finance (Mr. C. McCreevy)") becomes the role, and bare
    office labels ("An Taoiseach") are kept verbatim with the role taken
    from the title table.
    """
    titles = titles or default_titles()
    m = _LABEL.match(line)
    if not m:
        return None
    label = " ".join(m.group("label").split())
    body = (m.group("body") or "").strip()
    if any(ch.isdigit() for ch in label) or titles.is_nonspeaker(label):
        return None

    paren = _PAREN.match(label)
    if paren:
        name = titles.strip_honorifics(paren.group("inner").strip())
        if _name_like(name):
            return SpeakerLabel(name, paren.group("role").strip(), label, body)
        return None

    role = titles.role_for(label)
    if role is not None:
        return SpeakerLabel(label, role, label, body)
    if label.startswith("Minister ") and len(label.split()) <= 14:
        return SpeakerLabel(label, label, label, body)

    name = titles.strip_honorifics(label)
    if _name_like(name):
        return SpeakerLabel(name, None, label, body)
    return None


# -- dates ----------------------------------------------------------------

_MONTHS = {m: i for i, m in enumerate(
    ["january", "february", "march", "april", "may", "june", "july", "august",
     "september", "october", "november", "december"], start=1)}
_PROSE_DATE = re.compile(
    r"\b(\d{1,2})(?:st|nd|rd|th)?\s+(" + "|".join(_MONTHS) + r"),?\s+(\d{4})\b", re.I
)
_ISO_DATE = re.compile(r"\b(\d{4})-(\d{2})-(\d{2})\b")


def find_date(text: str) -> Optional[dt.date]:
    """First ISO or prose ("5th December, 2007") date in ``text``."""
    candidates = []
    for m in _ISO_DATE.finditer(text):
        try:
            candidates.append((m.start(), dt.date(int(m[1]), int(m[2]), int(m[3]))))
        except ValueError:
            pass
    for m in _PROSE_DATE.finditer(text):
        try:
            candidates.append((m.start(), dt.date(int(m[3]), _MONTHS[m[2].lower()], int(m[1]))))
        except ValueError:
            pass
    return min(candidates)[1] if candidates else None


# -- markup ---------------------------------------------------------------


class _BlockParser(HTMLParser):
    def __init__(self, dialect: Dialect):
        super().__init__(convert_charrefs=True)
        self.d = dialect
        self.blocks: list[Block] = []
        self.title_parts: list[str] = []
        self.meta_date: Optional[str] = None
        self.skip_depth = 0
        self.in_title = False
        self.italic_depth = 0
        self.block_starts = 0
        self.stray_ends = 0
        self._open: Optional[str] = None  # tag of the open block
        self._kind = "para"
        self._parts: list[str] = []
        self._plain_chars = 0  # non-space chars outside italics in the open block
        self._loose: list[str] = []

    def _flush_loose(self):
        text = " ".join("".join(self._loose).split())
        self._loose = []
        if text:
            self.blocks.append(Block("para", text))

    def _close_block(self):
        if self._open is None:
            return
        text = " ".join("".join(self._parts).split())
        kind = self._kind
        if kind == "para" and text and self._plain_chars == 0:
            kind = "procedural"
        if text:
            self.blocks.append(Block(kind, text))
        self._open, self._parts, self._plain_chars = None, [], 0

    def handle_starttag(self, tag, attrs):
        attrs = dict(attrs)
        if tag == "meta" and (attrs.get("name") or "").lower() in {"date", "dc.date"}:
            self.meta_date = attrs.get("content")
        if tag == "time" and attrs.get("datetime") and self.meta_date is None:
            self.meta_date = attrs["datetime"]
        if tag == "title":
            self.in_title = True
        if tag in self.d.skip_tags:
            self.skip_depth += 1
            return
        if tag in self.d.italic_tags:
            self.italic_depth += 1
        if tag == "br" and self._open is not None:
            self._parts.append("\n")
        if tag in self.d.heading_tags or tag in self.d.paragraph_tags:
            self._flush_loose()
            self._close_block()  # implicit close of an unterminated block
            self.block_starts += 1
            self._open = tag
            classes = set((attrs.get("class") or "").split())
            if tag in self.d.heading_tags:
                self._kind = "heading"
            elif classes & self.d.procedural_classes:
                self._kind = "procedural"
            else:
                self._kind = "para"

    def handle_endtag(self, tag):
        if tag == "title":
            self.in_title = False
        if tag in self.d.skip_tags:
            self.skip_depth = max(0, self.skip_depth - 1)
            return
        if tag in self.d.italic_tags:
            self.italic_depth = max(0, self.italic_depth - 1)
        if tag in self.d.heading_tags or tag in self.d.paragraph_tags:
            if self._open == tag:
                self._close_block()
            else:
                self.stray_ends += 1

    def handle_data(self, data):
        if self.in_title:
            self.title_parts.append(data)
        if self.skip_depth:
            return
        if self._open is None:
            self._loose.append(data)
            return
        self._parts.append(data)
        if not self.italic_depth:
            self._plain_chars += sum(1 for ch in data if not ch.isspace())

    def finish(self):
        self._flush_loose()
        self._close_block()


def decode_bytes(raw: bytes) -> tuple[str, bool]:
    """UTF-8, falling back to Latin-1. Returns (text, used_fallback)."""
    try:
        return raw.decode("utf-8"), False
    except UnicodeDecodeError:
        return raw.decode("latin-1"), True


def parse_markup(markup: str, source_path: str = "<string>", sitting_date: Optional[dt.date] = None,
                 dialect: Dialect = CANONICAL) -> TranscriptFile:
    """Split markup into ordered blocks and resolve the sitting date.

    An explicit ``sitting_date`` (from a manifest) wins over dates found in
    the file. A file without any date yields ``sitting_date=None``;
    :func:`parse_file` rejects it.
    """
    if not markup.strip():
        raise EmptyFile(f"{source_path}: file is empty")
    p = _BlockParser(dialect)
    p.feed(markup)
    leftover = p.rawdata[p.rawdata.find("<"):] if "<" in p.rawdata else ""
    if re.match(r"</?[A-Za-z]", leftover):
        raise MalformedMarkup(f"{source_path}: unterminated tag at end of file: {leftover[:40]!r}")
    p.close()
    p.finish()
    if p.stray_ends > p.block_starts:
        raise MalformedMarkup(
            f"{source_path}: {p.stray_ends} closing block tags without an opening tag "
            f"({p.block_starts} blocks opened)"
        )
    if not p.blocks:
        raise EmptyFile(f"{source_path}: no visible text")
    title = " ".join("".join(p.title_parts).split())
    if sitting_date is None:
        for source in [p.meta_date or "", title] + [b.text for b in p.blocks[:5]]:
            sitting_date = find_date(source)
            if sitting_date:
                break
    return TranscriptFile(source_path, sitting_date, p.blocks, title)


def read_transcript(path: str | Path, sitting_date: Optional[dt.date] = None,
                    dialect: Dialect = CANONICAL) -> tuple[TranscriptFile, bool]:
    raw = Path(path).read_bytes()
    if not raw.strip():
        raise EmptyFile(f"{path}: file is empty")
    text, fallback = decode_bytes(raw)
    if fallback:
        logger.warning("%s: not valid UTF-8, decoded as Latin-1", path)
    return parse_markup(text, str(path), sitting_date, dialect), fallback


def parse_transcript(f: TranscriptFile, titles: TitleTable | None = None) -> ParseResult:
    """Segment blocks into turns; see :func:`parse_file`."""
    if f.sitting_date is None:
        raise NoDateFound(f"{f.source_path}: no sitting date in file or manifest")
    titles = titles or default_titles()
    contributions: list[Contribution] = []
    segments: list[tuple[str, str]] = []
    dropped = 0
    heading = ""
    turn: Optional[SpeakerLabel] = None
    paragraphs: list[str] = []

    def close_turn():
        nonlocal turn, paragraphs
        if turn is not None:
            text = "\n".join(p for p in paragraphs if p)
            contributions.append(Contribution(
                speaker_raw=turn.speaker_raw, debate_title=heading, date=f.sitting_date,
                text=text, word_count=count_words(text), role=turn.role,
                procedural=not text.strip(),
            ))
        turn, paragraphs = None, []

    for block in f.blocks:
        if block.kind == "heading":
            close_turn()
            heading = block.text
            segments.append(("heading", block.text))
        elif block.kind == "procedural":
            dropped += 1
            segments.append(("procedural", block.text))
        else:
            label = extract_speaker(block.text, titles)
            if label is not None:
                close_turn()
                turn, paragraphs = label, [label.body]
                segments.append(("speaker", label.label + ":"))
                if label.body:
                    segments.append(("body", label.body))
            elif turn is not None:
                paragraphs.append(block.text)
                segments.append(("body", block.text))
            else:
                dropped += 1
                segments.append(("dropped", block.text))
    close_turn()
    return ParseResult(contributions, segments, turns=len(contributions), dropped=dropped)


def parse_file(f: TranscriptFile, titles: TitleTable | None = None) -> list[Contribution]:
    """Contributions (unlinked, without ids) for every speaker turn, in source order.

    ``debate_title`` is the nearest preceding heading and ``date`` the
    sitting date.
    """
    return parse_transcript(f, titles).contributions


# -- directories ----------------------------------------------------------


def read_manifest(path: str | Path) -> dict[str, dt.date]:
    """TSV with header ``path<TAB>sitting_date``; paths relative to the input directory."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0].split("\t")[:2] != ["path", "sitting_date"]:
        raise DataError(f"{path}: manifest header must be path/sitting_date")
    out = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split("\t")
        try:
            out[parts[0]] = dt.date.fromisoformat(parts[1])
        except (IndexError, ValueError):
            raise DataError(f"{path}:{lineno}: bad manifest row {line!r}") from None
    return out


def _thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("HANSARD_SCALE_THREADS", "1")))
    except ValueError:
        return 1


def ingest_directory(root: str | Path, manifest: dict[str, dt.date] | None = None,
                     dialect: Dialect = CANONICAL, titles: TitleTable | None = None,
                     threads: int | None = None) -> tuple[list[Contribution], ParseReport]:
    """Parse every transcript under ``root``.

    Files are processed in sorted path order and contribution ids are
    assigned sequentially in that order, so output does not depend on
    ``threads``. Per-file failures are recorded in the report, not raised.
    """
    root = Path(root)
    if not root.is_dir():
        raise DataError(f"input directory not found: {root}")
    manifest = manifest or {}
    paths = sorted(p for p in root.rglob("*") if p.suffix.lower() in TRANSCRIPT_SUFFIXES)
    titles = titles or default_titles()

    def work(path: Path):
        rel = path.relative_to(root).as_posix()
        try:
            f, fallback = read_transcript(path, manifest.get(rel), dialect)
            return rel, parse_transcript(f, titles), fallback, None
        except DataError as exc:
            return rel, None, False, exc

    with ThreadPoolExecutor(max_workers=threads or _thread_cap()) as pool:
        results = list(pool.map(work, paths))

    report = ParseReport(files=len(paths))
    out: list[Contribution] = []
    for rel, result, fallback, exc in results:
        if fallback:
            report.latin1_fallbacks.append(rel)
        if exc is not None:
            report.errors.append({"file": rel, "error": type(exc).__name__, "message": str(exc)})
            continue
        report.parsed += 1
        report.turns += result.turns
        report.dropped += result.dropped
        out.extend(result.contributions)
    out = [replace(c, contribution_id=k) for k, c in enumerate(out, start=1)]
    report.contributions = len(out)
    return out, report
