"""Exception types shared across the engine."""


class SdcError(Exception):
    """Base class for every error the engine raises deliberately."""


class ConfigError(SdcError):
    """Risk-appetite configuration is missing, malformed, or out of range."""


class DatasetError(SdcError):
    """CSV ingestion failed (I/O, malformed header, ragged row, bad schema)."""


class UnknownColumnError(SdcError):
    def __init__(self, name, available):
        self.name = name
        self.available = tuple(available)
        listing = ", ".join(self.available) if self.available else "(none)"
        super().__init__(f"unknown column {name!r}; available columns: {listing}")


class TypeMismatchError(SdcError):
    """A column has the wrong kind for the requested operation."""


class ProhibitionError(SdcError):
    """The requested statistic is never released, regardless of cell contents."""


class TableError(SdcError):
    """Tabulation request is invalid."""


class EmptyTableError(TableError):
    """No rows remain once missing index/column values are dropped."""


class FormulaError(SdcError):
    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class RegressionError(SdcError):
    """Model fitting failed or the design matrix is unusable."""


class RankDeficiencyError(RegressionError):
    def __init__(self, column_name):
        self.column_name = column_name
        super().__init__(
            f"design matrix is rank deficient: column {column_name!r} is "
            "linearly dependent on the columns before it"
        )


class SeparationError(RegressionError):
    """Perfect separation: the likelihood diverges and no finite fit exists."""


class SessionError(SdcError):
    """Session store operation failed."""


class UnknownOutputError(SessionError):
    def __init__(self, key):
        self.key = key
        super().__init__(f"no output with id {key!r} in this session")


class SessionLockError(SessionError):
    """Another process holds the session directory lock."""
