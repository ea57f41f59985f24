"""Exception types raised by the library.

Argument/precondition misuse raises plain ValueError; these classes cover
failures caused by the dataset itself (unreadable paths, malformed label
files). The CLI maps DatasetError and OSError to exit code 2.
"""

from __future__ import annotations


class DatasetError(Exception):
    """A problem with the dataset on disk."""


class IngestError(DatasetError):
    """Directory scan failed (missing/unreadable path, no images)."""


class LabelParseError(IngestError):
    """A YOLO label line could not be parsed.

    file_name/line_number are filled in by the directory scanner; they
    stay None when a single line is parsed directly.
    """

    def __init__(self, message: str, file_name: str | None = None,
                 line_number: int | None = None):
        self.file_name = file_name
        self.line_number = line_number
        if file_name is not None:
            message = f"{file_name}:{line_number}: {message}"
        super().__init__(message)
