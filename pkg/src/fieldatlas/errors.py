"""Exception hierarchy shared by all fieldatlas modules."""

from __future__ import annotations


class FieldatlasError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(FieldatlasError):
    """Input document is not well-formed (JSON, GeoJSON, CSV...)."""

    def __init__(self, message: str, position: int | None = None,
                 line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.position = position
        self.line = line
        self.column = column


class StructureError(FieldatlasError):
    """Well-formed document with the wrong top-level shape."""


class RegistryError(FieldatlasError):
    """Format registry file is malformed or violates registry invariants."""


class MetadataError(FieldatlasError):
    """Collection metadata violates its invariants."""

    def __init__(self, message: str, fields: list[str]):
        super().__init__(message)
        self.fields = fields


class TransformError(FieldatlasError):
    """A dataset transform was asked to do something its preconditions forbid."""


class UnknownIdError(TransformError):
    """No feature with the requested id exists in the dataset."""


class UnsupportedKindError(FieldatlasError):
    """Operation restricted to point kinds was asked for a line kind (or vice versa)."""


class CsvStructureError(FieldatlasError):
    """CSV source is missing structurally required columns."""


class QrError(FieldatlasError):
    """Base class for QR frame codec errors."""


class FrameFormatError(QrError):
    """A frame text does not match the frame grammar.

    ``part`` names the offending pipe-delimited part, ``position`` is the
    character offset of that part within the frame text.
    """

    def __init__(self, message: str, part: str, position: int):
        super().__init__(message)
        self.part = part
        self.position = position


class TransferMismatchError(QrError):
    """Frames from different transfers were mixed in one assembly."""


class ChunkConflictError(QrError):
    """Two frames claim the same index with different content."""


class ChecksumMismatchError(QrError):
    """Reassembled payload does not match the declared checksum."""

    def __init__(self, expected: str, actual: str):
        super().__init__(f"checksum mismatch: expected {expected}, got {actual}")
        self.expected = expected
        self.actual = actual


class DecompressError(QrError):
    """Reassembled payload is not a valid compressed stream."""


class PublishError(FieldatlasError):
    """Publication aborted."""


class PublishValidationError(PublishError):
    """Dataset failed validation; nothing was written."""

    def __init__(self, report):
        super().__init__(
            f"dataset has {len(report.errors)} validation error(s); publish aborted")
        self.report = report


class FetchError(FieldatlasError):
    """An injected fetcher could not retrieve a URL."""
