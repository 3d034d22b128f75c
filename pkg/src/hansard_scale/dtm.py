"""Tokenisation and document-term count matrices.

Preprocessing follows the recipe used for the scaling models: numbers,
punctuation and stop words are removed, and terms used in fewer than a given
fraction of documents are dropped before estimation.
"""

from __future__ import annotations

import io
import math
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError, DuplicateLabel, EmptySelection, EmptyVocabulary

__all__ = [
    "PreprocessConfig",
    "CountMatrix",
    "default_stopwords",
    "load_stopwords",
    "tokenize",
    "count_words",
    "drop_interjections",
    "build_matrix",
    "top_terms",
    "read_matrix",
    "read_triplets",
]

# Dash punctuation splits words ("pro-government" -> "pro government").
_DASHES = re.compile(r"[\-‐‑‒–—―−/]")
_PUNCT = re.compile(r"[^\w\s]|_")
_DIGITS = re.compile(r"\d")


def load_stopwords(path: str | Path) -> frozenset[str]:
    """One word per line; blank lines and ``#`` comments ignored."""
    text = Path(path).read_text(encoding="utf-8")
    return _parse_stopwords(text)


def _parse_stopwords(text: str) -> frozenset[str]:
    words = (line.strip() for line in text.splitlines())
    return frozenset(w for w in words if w and not w.startswith("#"))


_DEFAULT_STOPWORDS: frozenset[str] | None = None


def default_stopwords() -> frozenset[str]:
    """The English stop word list shipped in ``data/stopwords_en.txt``."""
    global _DEFAULT_STOPWORDS
    if _DEFAULT_STOPWORDS is None:
        text = resources.files("hansard_scale").joinpath("data/stopwords_en.txt").read_text("utf-8")
        _DEFAULT_STOPWORDS = _parse_stopwords(text)
    return _DEFAULT_STOPWORDS


@dataclass(frozen=True)
class PreprocessConfig:
    lowercase: bool = True
    strip_numbers: bool = True
    strip_punct: bool = True
    stopword_list: frozenset[str] = field(default_factory=default_stopwords)
    min_doc_frequency: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.min_doc_frequency <= 1.0:
            raise ValueError(f"min_doc_frequency must lie in [0, 1], got {self.min_doc_frequency}")
        object.__setattr__(self, "stopword_list", frozenset(self.stopword_list))


# Used for Contribution.word_count: every printed word counts, numbers included.
WORD_COUNT_CONFIG = PreprocessConfig(
    lowercase=False, strip_numbers=False, strip_punct=True, stopword_list=frozenset()
)


def tokenize(text: str, cfg: PreprocessConfig | None = None) -> list[str]:
    """Split ``text`` into cleaned tokens.

    Text is NFC-normalised, dashes split words, and the remaining cleaning
    steps are applied per the flags in ``cfg``. Tokens left empty by the
    cleaning are discarded.
    """
    if cfg is None:
        cfg = PreprocessConfig()
    if not text:
        return []
    text = unicodedata.normalize("NFC", text)
    if cfg.lowercase:
        text = text.lower()
    text = _DASHES.sub(" ", text)
    if cfg.strip_punct:
        text = _PUNCT.sub("", text)
    if cfg.strip_numbers:
        text = _DIGITS.sub("", text)
    tokens = text.split()
    if cfg.stopword_list:
        stop = cfg.stopword_list
        tokens = [t for t in tokens if t not in stop]
    return tokens


def count_words(text: str) -> int:
    return len(tokenize(text, WORD_COUNT_CONFIG))


def drop_interjections(
    docs: Sequence[tuple[str, str]], min_tokens: int = 10, cfg: PreprocessConfig | None = None
) -> list[tuple[str, str]]:
    """Remove short contributions (fewer than ``min_tokens`` cleaned tokens)."""
    return [(label, text) for label, text in docs if len(tokenize(text, cfg)) >= min_tokens]


@dataclass
class CountMatrix:
    """Documents x terms matrix of raw token counts."""

    docs: list[str]
    terms: list[str]
    counts: np.ndarray

    def __post_init__(self):
        self.docs = list(self.docs)
        self.terms = list(self.terms)
        self.counts = np.asarray(self.counts)
        if self.counts.ndim != 2 or self.counts.shape != (len(self.docs), len(self.terms)):
            raise DataError(
                f"count matrix shape {self.counts.shape} does not match "
                f"{len(self.docs)} docs x {len(self.terms)} terms"
            )
        if len(set(self.docs)) != len(self.docs):
            raise DuplicateLabel(f"duplicate document label in {self.docs!r}")
        if len(set(self.terms)) != len(self.terms):
            raise DataError("duplicate term in vocabulary")

    @property
    def shape(self) -> tuple[int, int]:
        return self.counts.shape

    def doc_index(self, label: str) -> int:
        try:
            return self.docs.index(label)
        except ValueError:
            raise KeyError(f"unknown document label {label!r}") from None

    def subset(self, labels: Iterable[str]) -> "CountMatrix":
        """Rows for ``labels`` in the given order; the vocabulary is unchanged."""
        labels = list(labels)
        idx = [self.doc_index(label) for label in labels]
        return CountMatrix(labels, self.terms, self.counts[idx])

    def to_tsv(self) -> str:
        out = io.StringIO()
        out.write("doc\t" + "\t".join(self.terms) + "\n")
        for label, row in zip(self.docs, self.counts):
            out.write(label + "\t" + "\t".join(str(int(v)) for v in row) + "\n")
        return out.getvalue()

    def to_triplets(self) -> str:
        out = io.StringIO()
        out.write("doc\tterm\tcount\n")
        for i, j in zip(*np.nonzero(self.counts)):
            out.write(f"{self.docs[i]}\t{self.terms[j]}\t{int(self.counts[i, j])}\n")
        return out.getvalue()

    def write(self, path: str | Path, sparse: bool = False) -> None:
        text = self.to_triplets() if sparse else self.to_tsv()
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def read_matrix(path: str | Path) -> CountMatrix:
    """Read the dense TSV layout written by :meth:`CountMatrix.to_tsv`."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise DataError(f"{path}: empty matrix file")
    header = lines[0].split("\t")
    if header[0] != "doc":
        raise DataError(f"{path}: first header column must be 'doc'")
    terms = header[1:]
    docs, rows = [], []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if len(parts) != len(header):
            raise DataError(f"{path}:{lineno}: expected {len(header)} columns, got {len(parts)}")
        docs.append(parts[0])
        try:
            rows.append([int(v) for v in parts[1:]])
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: non-integer count ({exc})") from None
    counts = np.array(rows, dtype=np.int64).reshape(len(docs), len(terms))
    return CountMatrix(docs, terms, counts)


def read_triplets(path: str | Path) -> CountMatrix:
    """Read the sparse (doc, term, count) layout; docs and terms in first-seen order."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0].split("\t") != ["doc", "term", "count"]:
        raise DataError(f"{path}: expected header doc/term/count")
    cells: dict[tuple[str, str], int] = {}
    docs: dict[str, None] = {}
    terms: dict[str, None] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if len(parts) != 3:
            raise DataError(f"{path}:{lineno}: expected 3 columns")
        doc, term, count = parts
        docs.setdefault(doc)
        terms.setdefault(term)
        cells[doc, term] = int(count)
    term_order = sorted(terms)
    doc_list, col = list(docs), {t: j for j, t in enumerate(term_order)}
    counts = np.zeros((len(doc_list), len(term_order)), dtype=np.int64)
    for i, doc in enumerate(doc_list):
        for term in term_order:
            counts[i, col[term]] = cells.get((doc, term), 0)
    return CountMatrix(doc_list, term_order, counts)


def _keeps(df: int, n_docs: int, min_doc_frequency: float) -> bool:
    # "less than p of all documents" is removed, so the boundary df == p*N stays;
    # isclose guards against p*N landing a hair above an integer.
    threshold = min_doc_frequency * n_docs
    return df >= threshold or math.isclose(df, threshold, rel_tol=1e-12, abs_tol=1e-12)


def build_matrix(docs: Sequence[tuple[str, str]], cfg: PreprocessConfig | None = None) -> CountMatrix:
    """Tokenise ``(label, text)`` pairs into a count matrix.

    Terms whose document frequency is strictly below
    ``cfg.min_doc_frequency * len(docs)`` are removed; the vocabulary is
    sorted lexicographically.
    """
    if cfg is None:
        cfg = PreprocessConfig()
    labels = [label for label, _ in docs]
    seen = set()
    for label in labels:
        if label in seen:
            raise DuplicateLabel(f"duplicate document label {label!r}")
        seen.add(label)

    bags = [Counter(tokenize(text, cfg)) for _, text in docs]
    df: Counter[str] = Counter()
    for bag in bags:
        df.update(bag.keys())
    n = len(docs)
    vocab = sorted(t for t, d in df.items() if _keeps(d, n, cfg.min_doc_frequency))
    if not vocab:
        raise EmptyVocabulary(
            f"no term survives min_doc_frequency={cfg.min_doc_frequency} over {n} documents"
        )
    col = {t: j for j, t in enumerate(vocab)}
    counts = np.zeros((n, len(vocab)), dtype=np.int64)
    for i, bag in enumerate(bags):
        for term, c in bag.items():
            j = col.get(term)
            if j is not None:
                counts[i, j] = c
    return CountMatrix(labels, vocab, counts)


def top_terms(m: CountMatrix, docs: Iterable[str] | None = None, n: int = 20) -> list[tuple[str, int]]:
    """Most frequent terms over a subset of documents.

    Counts are summed over ``docs`` (all documents when None) and the top
    ``n`` returned as ``(term, count)``, by descending count then term.
    Terms with zero count in the subset are not reported.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if docs is None:
        rows = m.counts
    else:
        labels = list(docs)
        if not labels:
            raise EmptySelection("no documents selected")
        try:
            rows = m.counts[[m.doc_index(label) for label in labels]]
        except KeyError as exc:
            raise EmptySelection(str(exc)) from None
    totals = rows.sum(axis=0)
    ranked = sorted(
        ((term, int(c)) for term, c in zip(m.terms, totals) if c > 0),
        key=lambda tc: (-tc[1], tc[0]),
    )
    return ranked[:n]
