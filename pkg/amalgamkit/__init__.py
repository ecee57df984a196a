from __future__ import annotations

__all__ = ["words", "factors", "amalgam", "bass_serre", "rewriting", "metrics", "catalog", "cli"]

from pkg_resources import DistributionNotFound, get_distribution

try:
    __version__ = get_distribution(__name__).version
except DistributionNotFound:
    # Package - NOT Installed
    __version__ = "0.0.0"


class AmalgamError(Exception):
    pass


class AlphabetError(AmalgamError):
    pass


class ParseError(AmalgamError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class ValidationError(AmalgamError):
    pass


class MalformedAmalgamError(ValidationError):
    pass


class UnsupportedAmalgamError(ValidationError):
    pass


class BudgetError(AmalgamError):
    def __init__(self, message: str, last_radius: int | None = None):
        self.last_radius = last_radius
        super().__init__(message if last_radius is None else f"{message} (last completed radius {last_radius})")


class DomainError(AmalgamError):
    pass


class MalformedSequenceError(AmalgamError):
    def __init__(self, message: str, conditions: list[int] | None = None):
        self.conditions = conditions or []
        super().__init__(message)
