"""Exception hierarchy shared across the toolkit."""


class TamperscopeError(Exception):
    """Base class for all toolkit errors."""


class InvalidInputError(TamperscopeError, ValueError):
    """Bad argument, unsupported format, or an image too small to analyze."""


class SpecError(InvalidInputError):
    """Invalid synthesis spec; carries the offending field name."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class UndefinedScoreError(TamperscopeError):
    """A metric has no defined value (empty evaluated region)."""


class NoTripletsError(TamperscopeError):
    """Triplet mining found an unpopulated patch class."""
