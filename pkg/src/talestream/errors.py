"""Exception hierarchy shared by all talestream modules."""


class TaleStreamError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(TaleStreamError):
    """A dataset line could not be parsed."""

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class DuplicateIdError(TaleStreamError):
    """Two records of the same kind share an id."""


class InvalidIdError(TaleStreamError):
    """An id is empty or contains characters outside [A-Za-z0-9_./-]."""


class ReferentialIntegrityError(TaleStreamError):
    """An edge references an id that does not resolve within the corpus."""

    def __init__(self, source: str, field: str, target: str):
        self.source = source
        self.field = field
        self.target = target
        super().__init__(f"trope {source!r}: {field} references unknown id {target!r}")


class NotFoundError(TaleStreamError):
    """A trope, index, or movie id was not found in the corpus."""


class InvalidQueryError(TaleStreamError):
    """A suggestion query violates its preconditions."""


class InvalidTemperatureError(TaleStreamError):
    """Temperature must be positive (zero only in deterministic mode)."""


class EmptyCandidateSetError(TaleStreamError):
    """Filters eliminated every candidate trope."""


class AllZeroScoresError(TaleStreamError):
    """No candidate received a positive score; nothing can be drawn."""


class InsufficientPopulationError(TaleStreamError):
    """A without-replacement sample was requested from too small a population."""


class EmptyInputError(TaleStreamError):
    """An aggregate was requested over an empty value list."""


class IoError(TaleStreamError):
    """A dataset file could not be read or written."""
