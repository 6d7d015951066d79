"""Exception hierarchy shared across the toolkit.

The CLI maps these onto exit codes: configuration/usage problems exit 1,
data problems (parse, validation, alignment, model files) exit 2, anything
unexpected exits 3.
"""


class NomadjError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(NomadjError):
    """Invalid configuration value or unusable option combination."""


class ParseError(NomadjError):
    """Malformed input file. Carries the 1-based line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class ValidationError(NomadjError):
    """Data violates a structural invariant (bad tag, dangling reference, ...)."""


class AlignmentError(NomadjError):
    """Gold and predicted corpora do not share the same shape or words."""


class ModelIOError(NomadjError):
    """Model file is truncated, corrupt, or has an unsupported version."""


class ComparisonError(NomadjError):
    """Two evaluation reports cannot be compared (different metric sets)."""


class UndefinedSimilarityError(NomadjError):
    """Cosine similarity requested for an empty distribution."""
