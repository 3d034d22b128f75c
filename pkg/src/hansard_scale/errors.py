"""Exception hierarchy shared by all modules.

Every error the CLI maps to exit code 2 derives from ``DataError``.
"""


class HansardError(Exception):
    """Base class for package errors."""


class DataError(HansardError):
    """Bad input data; carries enough context to name the offending record."""


# corpus_store
class InvariantViolation(DataError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class DuplicateId(DataError):
    pass


class StoreUnavailable(HansardError):
    pass


# ingest
class MalformedMarkup(DataError):
    pass


class NoDateFound(DataError):
    pass


class EmptyFile(DataError):
    pass


# linkage
class BothEmpty(DataError):
    pass


class EmptyRegister(DataError):
    pass


# dtm
class DuplicateLabel(DataError):
    pass


class EmptyVocabulary(DataError):
    pass


class EmptySelection(DataError):
    pass


# scaling
class DimensionMismatch(DataError):
    pass


class NotIdentifiable(DataError):
    pass


class NoConvergence(HansardError):
    """Raised only on request; by default a flagged partial fit is returned."""

    def __init__(self, message: str, fit=None):
        super().__init__(message)
        self.fit = fit


class NoConvergenceWarning(UserWarning):
    pass


class DegenerateReferences(DataError):
    pass


class NoOverlap(DataError):
    pass


# analysis
class ZeroVariance(DataError):
    pass


class TooFewPoints(DataError):
    pass


class InsufficientOverlap(DataError):
    pass


class EmptyResult(DataError):
    pass


# fixtures
class DegenerateSpec(DataError):
    pass
