class RoughtdaError(Exception):
    """Base class for all package errors."""

    exit_code = 2


class ParameterError(RoughtdaError, ValueError):
    """An argument is outside its allowed domain."""

    exit_code = 1


class ConfigError(RoughtdaError, ValueError):
    """A configuration file or object is invalid."""

    exit_code = 1


class DataError(RoughtdaError, ValueError):
    """Input data is malformed (non-finite values, empty classes, ...)."""

    exit_code = 2
