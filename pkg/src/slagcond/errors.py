"""Exception types shared across the package.

The CLI maps these onto exit codes: usage problems exit 1, data/schema/model
file problems exit 2, numeric failures during training exit 3.
"""


class SlagcondError(Exception):
    """Base class for all package-specific errors."""


class SchemaError(SlagcondError):
    """CSV header does not match the documented schema."""


class RowError(SlagcondError):
    """A data row failed validation; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class DataError(SlagcondError):
    """Dataset-level problem (empty file, degenerate statistics, bad split)."""


class ModelFormatError(SlagcondError):
    """Model file is missing, malformed, or has an unsupported format version."""


class NumericError(SlagcondError):
    """Non-finite value encountered where a finite one is required."""
