"""Exception hierarchy. The CLI maps these onto exit codes."""


class StreamDistError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class ConfigError(StreamDistError, ValueError):
    """Invalid parameter or incompatible objects (capacity, spec, p, tau...)."""

    exit_code = 2


class DataError(StreamDistError, ValueError):
    """Bad sample data: non-finite values, empty inputs, unreadable files."""

    exit_code = 3


class FormatError(DataError):
    """A serialized summary could not be decoded or failed validation."""


class CounterOverflowError(StreamDistError, OverflowError):
    """A counter or the processed weight left the unsigned 64-bit range."""

    exit_code = 3
