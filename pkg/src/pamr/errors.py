"""Exception hierarchy shared by the toolkit."""
from typing import List, Optional


class PamrError(Exception):
    """Base class for every error raised by the toolkit."""


class PenmanParseError(PamrError):
    """Raised when PENMAN text cannot be parsed.

    Attributes:
        diagnostic: the single ParseDiagnostic describing the failure
    """

    def __init__(self, diagnostic):
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic


class GraphError(PamrError):
    """Raised when an operation receives a graph that is not wellformed."""

    def __init__(self, message: str, diagnostics: Optional[List] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or []


class LexiconError(PamrError):
    """Raised for malformed or inconsistent lexicon files."""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        location = ""
        if path is not None:
            location = f"{path}:{line}: " if line is not None else f"{path}: "
        elif line is not None:
            location = f"line {line}: "
        super().__init__(f"{location}{message}")
        self.path = path
        self.line = line


class SmatchError(PamrError):
    """Raised when a scoring request is invalid."""


class SmatchSizeError(SmatchError):
    """Raised when the exact oracle is asked to score graphs above its cap."""


class CorpusError(PamrError):
    """Raised for corpus files that cannot be ingested."""

    def __init__(self, message: str, path: Optional[str] = None, record: Optional[int] = None):
        prefix = f"{path}: " if path else ""
        if record is not None:
            prefix += f"record {record}: "
        super().__init__(f"{prefix}{message}")
        self.path = path
        self.record = record


class EncodingError(PamrError):
    """Raised when an input file is not valid UTF-8."""

    def __init__(self, path: str, offset: int):
        super().__init__(f"{path}: not valid UTF-8 at byte {offset}")
        self.path = path
        self.offset = offset
