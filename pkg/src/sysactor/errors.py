"""Exception types and the violation witness shared by every check."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple


@dataclass(frozen=True)
class Violation:
    """One broken invariant or law instance.

    ``code`` names the law or invariant (``"CA"``, ``"Prop3.14"``,
    ``"actors.A.react"``), ``subjects`` carries the offending elements.
    """

    code: str
    message: str
    subjects: tuple = ()

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


class Verdict(NamedTuple):
    holds: bool
    witnesses: list


class SamError(Exception):
    """Base class for all errors raised by this package."""


class UnknownActorError(SamError, LookupError):
    pass


class UnknownLawError(SamError, LookupError):
    pass


class IncomparableError(SamError):
    """Two time sets live on clocks with no synchronization path."""


class ArityError(SamError, ValueError):
    pass


class OwnershipError(SamError):
    pass


class ConfigurationError(SamError):
    pass


class DanglingReferenceError(SamError):
    pass


class ValidationError(SamError):
    def __init__(self, report):
        self.report = report
        lines = "; ".join(str(v) for v in report.violations[:5])
        super().__init__(f"environment failed validation: {lines}")


class RunError(SamError):
    def __init__(self, message: str, witness: Violation | None = None):
        super().__init__(message)
        self.witness = witness


class DivergenceError(SamError):
    """Replay produced a different trace. ``index`` is the first differing event."""

    def __init__(self, index: int, expected, actual):
        self.index = index
        self.expected = expected
        self.actual = actual
        super().__init__(f"traces diverge at event #{index}: expected {expected!r}, got {actual!r}")


class SpecError(SamError):
    """Malformed spec or trace document; ``where`` is a line/col or a field path."""

    def __init__(self, where: str, message: str):
        self.where = where
        super().__init__(f"{where}: {message}")
