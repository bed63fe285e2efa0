"""Error types shared across the package.

DataError marks problems with user-supplied data (maps to CLI exit 2),
NumericError marks numeric failures during fitting (exit 3).
"""


class DataError(ValueError):
    pass


class CorpusFormatError(DataError):
    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class NumericError(RuntimeError):
    pass
