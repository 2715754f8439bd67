"""Exception hierarchy.

The CLI maps these onto exit codes: configuration problems exit with 1,
bad data with 2 and numerical breakdowns with 3.
"""


class TscError(Exception):
    """Base class for every error raised by tsclust."""

    exit_code = 1


class ConfigError(TscError, ValueError):
    """Invalid configuration, flag or hyperparameter."""

    exit_code = 1


class DataError(TscError, ValueError):
    """Input data is malformed (bad shapes, non-finite entries, unparsable files)."""

    exit_code = 2


class ParseError(DataError):
    """A dataset or labels file could not be parsed.

    ``line`` and ``column`` are 1-based and may be ``None`` when unknown.
    """

    def __init__(self, message, path=None, line=None, column=None):
        self.path = path
        self.line = line
        self.column = column
        loc = []
        if path is not None:
            loc.append(str(path))
        if line is not None:
            loc.append(f"line {line}")
        if column is not None:
            loc.append(f"column {column}")
        prefix = ", ".join(loc)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class NumericalError(TscError, ArithmeticError):
    """A numerical routine failed (Cholesky, SVD, eigensolver, log det of a singular transform)."""

    exit_code = 3
