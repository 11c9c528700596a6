"""Exception hierarchy shared across the package."""

from __future__ import annotations


class SpreadlensError(Exception):
    """Base class for all package errors."""


class ParseError(SpreadlensError):
    """Malformed input data. Carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigError(SpreadlensError):
    """Bad configuration value (unknown format tag, invalid mapping file...)."""


class ValidationError(SpreadlensError):
    """Fatal inconsistency while assembling a dataset snapshot."""


class DateRangeError(SpreadlensError):
    """A date or window falls outside the snapshot's date range."""


class UnknownCityError(SpreadlensError):
    """Lookup of a city name that is not part of the snapshot/index."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown city: {name!r}")


class GeocoderUnavailable(SpreadlensError):
    """The geocoding backend could not be reached."""
