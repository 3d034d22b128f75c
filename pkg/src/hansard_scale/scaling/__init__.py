"""Position scaling models: Wordfish (unsupervised) and Wordscore (reference texts)."""

from .wordfish import (
    WordfishFit,
    WordfishParams,
    starting_values,
    wordfish_fit,
    wordfish_gradient,
    wordfish_loglik,
)
from .wordscore import WordscoreFit, rescale, wordscore_fit, wordscore_from_matrix

__all__ = [
    "WordfishFit",
    "WordfishParams",
    "WordscoreFit",
    "rescale",
    "starting_values",
    "wordfish_fit",
    "wordfish_gradient",
    "wordfish_loglik",
    "wordscore_fit",
    "wordscore_from_matrix",
]
