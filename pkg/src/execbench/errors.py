"""Exception and warning types shared across the package."""


class ExecbenchError(Exception):
    """Base class for all errors raised by this package."""


class SchemaError(ExecbenchError):
    """The input file does not provide the configured columns."""


class DataError(ExecbenchError):
    """The input data is malformed or internally inconsistent."""


class ConfigError(ExecbenchError):
    """A configuration value or combination of values is unusable."""


class UnknownActivityError(ExecbenchError, KeyError):
    """An activity name is not part of the log's alphabet."""

    def __str__(self) -> str:  # KeyError would repr() the message
        return self.args[0] if self.args else ""


class UndefinedScoreError(ExecbenchError):
    """A score was requested for a pair with no co-occurring traces."""


class VacuousChangeError(ExecbenchError):
    """A process change touches no variant of the own log."""


class ExecbenchWarning(UserWarning):
    """Base class for diagnostics emitted by this package."""


class TruncationWarning(ExecbenchWarning):
    """Change enumeration stopped below the largest compatible set."""


class LogSimilarityWarning(ExecbenchWarning):
    """The two logs share few activities; matches may be unreliable."""


class SamplingWarning(ExecbenchWarning):
    """A requested sample size exceeded the available pool."""
