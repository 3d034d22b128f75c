"""Wordscore: supervised scaling from reference texts with known positions.

For reference texts r with a-priori scores A_r and relative word
frequencies F_wr, each word gets

    P(r | w) = F_wr / sum_r F_wr,        S_w = sum_r P(r | w) * A_r

and a virgin text v is scored by S_v = sum_w F'_wv * S_w, where F'_wv are
its relative frequencies renormalised over scored words only.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from ..dtm import CountMatrix
from ..errors import DataError, DegenerateReferences, NoOverlap

TRANSFORMS = ("lbg", "identity")


@dataclass
class WordscoreFit:
    reference_labels: list[str]
    reference_scores: np.ndarray
    terms: list[str]  # scored terms only
    word_scores: np.ndarray
    virgin_labels: list[str]
    virgin_raw: np.ndarray  # NaN for documents without scored words
    virgin_rescaled: np.ndarray
    transform: str = "lbg"
    no_overlap: list[str] = field(default_factory=list)

    def word_score_map(self) -> dict[str, float]:
        return dict(zip(self.terms, map(float, self.word_scores)))

    def raw_map(self) -> dict[str, float]:
        return dict(zip(self.virgin_labels, map(float, self.virgin_raw)))

    def rescaled_map(self) -> dict[str, float]:
        return dict(zip(self.virgin_labels, map(float, self.virgin_rescaled)))

    def word_scores_tsv(self) -> str:
        rows = ["term\tword_score"] + [f"{t}\t{s:.12g}" for t, s in zip(self.terms, self.word_scores)]
        return "\n".join(rows) + "\n"

    def doc_scores_tsv(self) -> str:
        rows = ["doc_label\traw\trescaled"]
        rows += [f"{d}\t{r:.12g}\t{s:.12g}" for d, r, s in
                 zip(self.virgin_labels, self.virgin_raw, self.virgin_rescaled)]
        return "\n".join(rows) + "\n"


def rescale(raw: np.ndarray, reference_scores: np.ndarray, transform: str = "lbg") -> np.ndarray:
    """Map raw virgin scores onto the reference metric.

    ``"lbg"`` is the affine map taking the mean and (population) standard
    deviation of the raw virgin scores to those of the reference scores;
    ``"identity"`` returns the raw scores. NaN entries are ignored and kept.
    """
    if transform not in TRANSFORMS:
        raise ValueError(f"unknown transform {transform!r}; choose from {TRANSFORMS}")
    raw = np.asarray(raw, dtype=float)
    if transform == "identity":
        return raw.copy()
    ok = np.isfinite(raw)
    sd_v = raw[ok].std() if ok.sum() else 0.0
    if ok.sum() < 2 or sd_v == 0:
        warnings.warn("fewer than two distinct virgin scores; rescaled scores equal raw scores", stacklevel=2)
        return raw.copy()
    return (raw - raw[ok].mean()) * (reference_scores.std() / sd_v) + reference_scores.mean()


def wordscore_fit(
    refs: CountMatrix,
    reference_scores: Sequence[float] | Mapping[str, float],
    virgins: CountMatrix,
    transform: str = "lbg",
) -> WordscoreFit:
    """Score ``virgins`` against reference texts.

    ``refs`` and ``virgins`` are matched on term labels, so they may carry
    different vocabularies. ``reference_scores`` is either a sequence in row
    order or a mapping from reference label to score. A virgin text with no
    scored word gets a NaN score and is listed in ``no_overlap``; this raises
    :class:`NoOverlap` only when it happens to every virgin.
    """
    if isinstance(reference_scores, Mapping):
        scores = np.array([float(reference_scores[d]) for d in refs.docs])
    else:
        scores = np.asarray(reference_scores, dtype=float)
    if scores.shape != (len(refs.docs),):
        raise DataError(f"{len(refs.docs)} reference texts but {scores.size} scores")
    if len(refs.docs) < 2 or np.unique(scores).size < 2:
        raise DegenerateReferences("need at least two reference texts with distinct scores")

    fr = np.asarray(refs.counts, dtype=float)
    rowsum = fr.sum(axis=1, keepdims=True)
    if np.any(rowsum == 0):
        raise DataError("a reference text has no counted words")
    F = fr / rowsum
    total = F.sum(axis=0)
    scored = total > 0
    P = F[:, scored] / total[scored]
    word_scores = P.T @ scores
    terms = [t for t, s in zip(refs.terms, scored) if s]

    col = {t: j for j, t in enumerate(terms)}
    vcols = [(jv, col[t]) for jv, t in enumerate(virgins.terms) if t in col]
    vc = np.asarray(virgins.counts, dtype=float)
    sub = np.zeros((len(virgins.docs), len(terms)))
    for jv, js in vcols:
        sub[:, js] = vc[:, jv]
    vtotal = sub.sum(axis=1)
    raw = np.full(len(virgins.docs), np.nan)
    ok = vtotal > 0
    raw[ok] = (sub[ok] / vtotal[ok, None]) @ word_scores
    no_overlap = [d for d, flag in zip(virgins.docs, ok) if not flag]
    if not ok.any():
        raise NoOverlap("no virgin text contains a scored word")
    if no_overlap:
        warnings.warn(f"virgin texts without scored words: {no_overlap}", stacklevel=2)

    return WordscoreFit(
        reference_labels=list(refs.docs), reference_scores=scores, terms=terms,
        word_scores=word_scores, virgin_labels=list(virgins.docs), virgin_raw=raw,
        virgin_rescaled=rescale(raw, scores, transform), transform=transform, no_overlap=no_overlap,
    )


def wordscore_from_matrix(m: CountMatrix, reference_scores: Mapping[str, float],
                          virgins: Sequence[str] | None = None, transform: str = "lbg") -> WordscoreFit:
    """Convenience: references and virgins are rows of one matrix.

    Virgins default to every row, references included.
    """
    refs = m.subset(reference_scores.keys())
    virgin_m = m.subset(virgins if virgins is not None else m.docs)
    return wordscore_fit(refs, reference_scores, virgin_m, transform)
