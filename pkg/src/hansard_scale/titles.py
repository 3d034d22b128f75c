"""Honorific and office-title table (``data/titles.tsv``).

Kept as data so new titles need no code change. Matching is on casefolded,
accent-preserving text.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path


@dataclass(frozen=True)
class TitleTable:
    honorifics: frozenset[str]
    roles: dict[str, str]  # label -> canonical role name
    nonspeakers: frozenset[str]

    def role_for(self, label: str) -> str | None:
        return self.roles.get(" ".join(label.casefold().split()))

    def is_nonspeaker(self, label: str) -> bool:
        return " ".join(label.casefold().split()) in self.nonspeakers

    def strip_honorifics(self, name: str) -> str:
        """Drop leading honorific words ("Mr.", "Deputy", ...), repeatedly."""
        words = name.split()
        while len(words) > 1 and words[0].casefold() in self.honorifics:
            words = words[1:]
        return " ".join(words)


def parse_titles(text: str) -> TitleTable:
    honorifics, nonspeakers, roles = set(), set(), {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        kind, label, *rest = line.split("\t")
        label = " ".join(label.casefold().split())
        if kind == "honorific":
            honorifics.add(label)
        elif kind == "role":
            roles[label] = rest[0].strip() if rest and rest[0].strip() else label
        elif kind == "nonspeaker":
            nonspeakers.add(label)
        else:
            raise ValueError(f"unknown title kind {kind!r}")
    return TitleTable(frozenset(honorifics), roles, frozenset(nonspeakers))


def load_titles(path: str | Path | None = None) -> TitleTable:
    if path is None:
        text = resources.files("hansard_scale").joinpath("data/titles.tsv").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return parse_titles(text)


_DEFAULT: TitleTable | None = None


def default_titles() -> TitleTable:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = load_titles()
    return _DEFAULT
