"""Parliamentary speech corpora and text scaling (Wordfish, Wordscore)."""

from .corpus_store import Contribution, CorpusQuery, CorpusStore, Member
from .dtm import CountMatrix, PreprocessConfig, build_matrix, top_terms
from .errors import DataError, HansardError
from .scaling import WordfishFit, WordscoreFit, wordfish_fit, wordscore_fit

__version__ = "0.1.0"

__all__ = [
    "Contribution", "CorpusQuery", "CorpusStore", "Member",
    "CountMatrix", "PreprocessConfig", "build_matrix", "top_terms",
    "DataError", "HansardError",
    "WordfishFit", "WordscoreFit", "wordfish_fit", "wordscore_fit",
    "__version__",
]
