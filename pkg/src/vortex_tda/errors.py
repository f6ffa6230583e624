"""Exception hierarchy.

Data problems (bad files, gaps, degenerate windows) raise :class:`DataError`;
bad parameters raise :class:`ConfigError`.  The CLI maps them to exit codes
1 and 2 respectively.
"""


class VortexTDAError(Exception):
    pass


class DataError(VortexTDAError, ValueError):
    pass


class ConfigError(VortexTDAError, ValueError):
    pass


class MalformedRowError(DataError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line


class DuplicateTimestampError(DataError):
    pass


class EmptySliceError(DataError):
    pass


class NormalizationError(DataError):
    pass


class AllWindowsSkippedError(DataError):
    pass


class FiltrationSizeError(ConfigError):
    pass


class MalformedFiltrationError(DataError):
    pass
