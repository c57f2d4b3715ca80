"""Roughness classification of synthetic surfaces with sublevel-set persistence
and classical signal-processing baselines."""

from .errors import ConfigError, DataError, ParameterError, RoughtdaError

__version__ = "0.1.0"

__all__ = ["ConfigError", "DataError", "ParameterError", "RoughtdaError", "__version__"]
