"""Record linkage of printed speaker names to the members register.

Similarity is the repeated longest-common-substring measure: the longest
common substring (at least ``min_common_len`` characters) is cut out of both
strings, the procedure repeats on the remainders, and the total extracted
length ``L`` is normalised as ``2L / (|a| + |b|)``.
"""

from __future__ import annotations

import datetime as dt
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .corpus_store import Contribution, CorpusStore, Member
from .errors import BothEmpty, DataError, EmptyRegister
from .titles import TitleTable, default_titles

MATCHED = "matched"
AMBIGUOUS = "ambiguous"
UNMATCHED = "unmatched"
OVERRIDE = "override"
TIE_EPS = 1e-12


@dataclass(frozen=True)
class LinkConfig:
    min_common_len: int = 2
    threshold: float = 0.80
    date_window: bool = True

    def __post_init__(self):
        if self.min_common_len < 2:
            raise ValueError("min_common_len must be at least 2")
        if not 0.0 < self.threshold <= 1.0:
            raise ValueError("threshold must lie in (0, 1]")


@dataclass(frozen=True)
class LinkResult:
    speaker_raw: str
    best_member_id: Optional[str]
    similarity: float
    status: str
    candidates: tuple[str, ...] = ()  # member ids tied at the maximum


@dataclass(frozen=True)
class RoleHolding:
    """A dated office: who answered to "An Taoiseach" on a given day."""

    role: str
    member_id: str
    start: dt.date
    end: Optional[dt.date] = None

    def covers(self, day: dt.date) -> bool:
        return self.start <= day and (self.end is None or day <= self.end)


# -- string similarity ------------------------------------------------------


def fold_accents(s: str) -> str:
    return "".join(ch for ch in unicodedata.normalize("NFKD", s) if not unicodedata.combining(ch))


def normalize_name(name: str, titles: TitleTable | None = None) -> str:
    """Lowercase, fold accents, drop punctuation and honorifics, collapse spaces."""
    titles = titles or default_titles()
    s = fold_accents(name).casefold()
    s = "".join(ch if ch.isalnum() or ch.isspace() else (" " if ch == "-" else "") for ch in s)
    words = s.split()
    while len(words) > 1 and (words[0] in titles.honorifics or words[0] + "." in titles.honorifics):
        words = words[1:]
    return " ".join(words)


def longest_common_substring(a: str, b: str) -> tuple[int, int, int]:
    """(length, start_in_a, start_in_b) of the longest common substring.

    Among equally long candidates the one starting leftmost in ``a`` wins,
    and within ``b`` the leftmost occurrence is taken.
    """
    best = (0, 0, 0)
    prev = [0] * (len(b) + 1)
    for i, ca in enumerate(a, start=1):
        cur = [0] * (len(b) + 1)
        for j, cb in enumerate(b, start=1):
            if ca == cb:
                k = prev[j - 1] + 1
                cur[j] = k
                start_a, start_b = i - k, j - k
                # strictly longer, or same length further left in a / in b
                if k > best[0] or (k == best[0] and (start_a, start_b) < (best[1], best[2])):
                    best = (k, start_a, start_b)
        prev = cur
    return best


def lcs_similarity(a: str, b: str, min_common_len: int = 2) -> float:
    """Repeated longest-common-substring similarity in [0, 1].

    Inputs are expected to be normalised already (see :func:`normalize_name`).
    The pair is first put in canonical order (shorter string first, then
    lexicographic), so the leftmost tie rule of
    :func:`longest_common_substring` gives the same answer in both
    argument orders. Equal strings score 1 even when shorter than
    ``min_common_len``.
    """
    if not a and not b:
        raise BothEmpty("similarity of two empty strings is undefined")
    if a == b:
        return 1.0
    if (len(b), b) < (len(a), a):
        a, b = b, a
    total_len = len(a) + len(b)
    common = 0
    while a and b:
        k, i, j = longest_common_substring(a, b)
        if k < min_common_len:
            break
        common += k
        a = a[:i] + a[i + k:]
        b = b[:j] + b[j + k:]
    return 2.0 * common / total_len


# -- speaker linkage --------------------------------------------------------


def name_variants(canonical_name: str, titles: TitleTable | None = None) -> tuple[str, ...]:
    """Printed forms a member's name takes in transcripts.

    Full name, initials plus surname ("b ahern"), and the first initial
    plus surname. Surname-first register entries ("Ahern, Bertie") are
    turned round first.
    """
    name = canonical_name
    if "," in name:
        surname, _, given = name.partition(",")
        name = f"{given.strip()} {surname.strip()}"
    full = normalize_name(name, titles)
    words = full.split()
    variants = [full]
    if len(words) >= 2:
        variants.append(" ".join([w[0] for w in words[:-1]] + [words[-1]]))
        variants.append(f"{words[0][0]} {words[-1]}")
        # Irish surnames with a particle ("o cuiv", "mac sharry")
        if len(words) >= 3 and len(words[-2]) <= 3:
            variants.append(f"{words[0][0]} {words[-2]} {words[-1]}")
    return tuple(dict.fromkeys(variants))


@dataclass
class Linker:
    """Links speaker strings against a register; caches normalised variants."""

    register: Sequence[Member]
    cfg: LinkConfig = field(default_factory=LinkConfig)
    roles: Sequence[RoleHolding] = ()
    titles: TitleTable = field(default_factory=default_titles)

    def __post_init__(self):
        if not self.register:
            raise EmptyRegister("the members register is empty")
        self._variants = {m.member_id: name_variants(m.canonical_name, self.titles) for m in self.register}
        self._cache: dict[tuple[str, Optional[dt.date]], LinkResult] = {}

    def _role_member(self, speaker_raw: str, day: Optional[dt.date]) -> Optional[LinkResult]:
        role = self.titles.role_for(speaker_raw)
        if role is None or day is None:
            return None
        holders = sorted({h.member_id for h in self.roles if h.role == role and h.covers(day)})
        if len(holders) == 1:
            return LinkResult(speaker_raw, holders[0], 1.0, MATCHED, tuple(holders))
        if len(holders) > 1:
            return LinkResult(speaker_raw, None, 1.0, AMBIGUOUS, tuple(holders))
        return LinkResult(speaker_raw, None, 0.0, UNMATCHED)

    def link(self, speaker_raw: str, day: Optional[dt.date] = None) -> LinkResult:
        key = (speaker_raw, day if self.cfg.date_window or self.roles else None)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._cache[key] = self._link(speaker_raw, day)
        return hit

    def _link(self, speaker_raw: str, day: Optional[dt.date]) -> LinkResult:
        by_role = self._role_member(speaker_raw, day)
        if by_role is not None:
            return by_role
        query = normalize_name(speaker_raw, self.titles)
        if not query:
            return LinkResult(speaker_raw, None, 0.0, UNMATCHED)
        candidates = self.register
        if self.cfg.date_window and day is not None:
            candidates = [m for m in candidates if m.active_on(day)]
        scores = {}
        for m in candidates:
            scores[m.member_id] = max(
                lcs_similarity(query, v, self.cfg.min_common_len) for v in self._variants[m.member_id]
            )
        if not scores:
            return LinkResult(speaker_raw, None, 0.0, UNMATCHED)
        best = max(scores.values())
        tied = tuple(sorted(mid for mid, s in scores.items() if best - s <= TIE_EPS))
        if best < self.cfg.threshold:
            return LinkResult(speaker_raw, None, best, UNMATCHED, tied)
        if len(tied) > 1:
            return LinkResult(speaker_raw, None, best, AMBIGUOUS, tied)
        return LinkResult(speaker_raw, tied[0], best, MATCHED, tied)


def link_speaker(speaker_raw: str, date: Optional[dt.date], register: Sequence[Member],
                 cfg: LinkConfig | None = None, roles: Sequence[RoleHolding] = ()) -> LinkResult:
    """Best register match for one printed name.

    Every candidate is scored (only members active on ``date`` when
    ``cfg.date_window`` is set). A unique maximum at or above the threshold
    is a match; a tie at the maximum is reported as ambiguous rather than
    resolved arbitrarily.
    """
    return Linker(register, cfg or LinkConfig(), roles).link(speaker_raw, date)


@dataclass
class LinkRow:
    contribution_id: int
    speaker_raw: str
    date: dt.date
    result: LinkResult


@dataclass
class LinkReport:
    rows: list[LinkRow]

    @property
    def counts(self) -> dict[str, int]:
        c = Counter(r.result.status for r in self.rows)
        return {s: c.get(s, 0) for s in (MATCHED, OVERRIDE, AMBIGUOUS, UNMATCHED)}

    @property
    def linked(self) -> int:
        return self.counts[MATCHED] + self.counts[OVERRIDE]

    def review(self) -> list[LinkRow]:
        """Rows needing a human decision: ambiguous and unmatched."""
        return [r for r in self.rows if r.result.status in (AMBIGUOUS, UNMATCHED)]

    def to_tsv(self) -> str:
        lines = ["contribution_id\tspeaker_raw\tdate\tstatus\tmember_id\tsimilarity\tcandidates"]
        for r in self.rows:
            res = r.result
            lines.append("\t".join([
                str(r.contribution_id), r.speaker_raw, r.date.isoformat(), res.status,
                res.best_member_id or "", f"{res.similarity:.6f}", ",".join(res.candidates),
            ]))
        return "\n".join(lines) + "\n"

    def review_tsv(self) -> str:
        """Distinct unresolved names, in the overrides layout with member_id blank."""
        seen = dict.fromkeys(r.speaker_raw for r in self.review())
        return "speaker_raw\tmember_id\n" + "".join(f"{s}\t\n" for s in seen)


def read_overrides(path: str | Path) -> dict[str, str]:
    """Human corrections: TSV ``speaker_raw<TAB>member_id``; blank ids are skipped."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"overrides file not found: {path}")
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0].split("\t")[:2] != ["speaker_raw", "member_id"]:
        raise DataError(f"{path}: header must be speaker_raw/member_id")
    out = {}
    for line in lines[1:]:
        parts = line.split("\t")
        if len(parts) >= 2 and parts[1].strip():
            out[parts[0]] = parts[1].strip()
    return out


def read_roles(path: str | Path) -> list[RoleHolding]:
    """TSV ``role<TAB>member_id<TAB>start<TAB>end`` (end may be blank)."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"roles file not found: {path}")
    lines = path.read_text(encoding="utf-8").splitlines()
    out = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        try:
            role, mid, start, end = (parts + [""])[:4]
            out.append(RoleHolding(role, mid, dt.date.fromisoformat(start),
                                   dt.date.fromisoformat(end) if end else None))
        except ValueError:
            raise DataError(f"{path}:{lineno}: bad role row {line!r}") from None
    return out


def write_roles(roles: Iterable[RoleHolding], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("role\tmember_id\tstart\tend\n")
        for h in roles:
            fh.write(f"{h.role}\t{h.member_id}\t{h.start.isoformat()}\t{h.end.isoformat() if h.end else ''}\n")


def link_contributions(contributions: Iterable[Contribution], register: Sequence[Member],
                       cfg: LinkConfig | None = None, overrides: dict[str, str] | None = None,
                       roles: Sequence[RoleHolding] = ()) -> LinkReport:
    """Link every contribution; pure, the input is not modified."""
    linker = Linker(register, cfg or LinkConfig(), roles)
    overrides = overrides or {}
    known = {m.member_id for m in register}
    rows = []
    for c in contributions:
        if c.speaker_raw in overrides:
            mid = overrides[c.speaker_raw]
            if mid not in known:
                raise DataError(f"override for {c.speaker_raw!r} names unknown member {mid!r}")
            res = LinkResult(c.speaker_raw, mid, 1.0, OVERRIDE, (mid,))
        else:
            res = linker.link(c.speaker_raw, c.date)
        rows.append(LinkRow(c.contribution_id, c.speaker_raw, c.date, res))
    return LinkReport(rows)


def link_corpus(store: CorpusStore, register: Sequence[Member], cfg: LinkConfig | None = None,
                overrides: dict[str, str] | None = None, roles: Sequence[RoleHolding] = ()) -> LinkReport:
    """Link all stored contributions and write member ids for resolved rows.

    The register is stored alongside so party and constituency joins work.
    Ambiguous and unmatched rows keep ``member_id`` empty and are listed by
    :meth:`LinkReport.review` for manual coding.
    """
    if not register:
        raise EmptyRegister("the members register is empty")
    report = link_contributions(store.iter_all(), register, cfg, overrides, roles)
    store.upsert_members(register)
    store.set_member_ids({
        r.contribution_id: r.result.best_member_id
        for r in report.rows
        if r.result.status in (MATCHED, OVERRIDE)
    })
    return report
