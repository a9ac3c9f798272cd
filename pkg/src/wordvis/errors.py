"""Exception types shared across the package."""


class WordvisError(Exception):
    """Base class for all errors raised by this package."""


class TableError(WordvisError):
    """Problem with a score table definition."""


class TableParseError(TableError):
    """Malformed score-table text. Carries the 1-based line and column."""

    def __init__(self, message, line, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class TableValidationError(TableError):
    """Structurally valid table text that violates a table invariant."""


class OcrParseError(WordvisError):
    """Input could not be parsed as the claimed OCR format."""


class SchemaError(OcrParseError):
    """Canonical JSON document violates the schema. Carries the field path."""

    def __init__(self, path, message):
        super().__init__(f"{path or '<root>'}: {message}")
        self.path = path


class RenderError(WordvisError):
    """Rendering cannot proceed (e.g. zero-dimension image)."""


class PipelineError(WordvisError):
    """Fatal batch or split failure."""


class AnalysisError(WordvisError):
    """Analysis input is unusable (e.g. empty lexicon)."""
