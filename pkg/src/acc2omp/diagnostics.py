"""Diagnostic records and the stable code catalog.

Every problem the translator reports carries a code from ``CATALOG``.  The
code alone fixes the severity, so tools can filter on either.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"


# code -> (severity, message template)
CATALOG: dict[str, tuple[Severity, str]] = {
    "E001": (Severity.ERROR, "malformed continuation: {detail}"),
    "E002": (Severity.ERROR, "unknown OpenACC construct: {detail}"),
    "E003": (Severity.ERROR, "clause not allowed here: {detail}"),
    "E004": (Severity.ERROR, "malformed clause arguments: {detail}"),
    "E005": (Severity.ERROR, "unknown OpenMP construct: {detail}"),
    "E006": (Severity.ERROR, "OpenMP clause not allowed here: {detail}"),
    "E007": (Severity.ERROR, "malformed OpenMP clause arguments: {detail}"),
    "E008": (Severity.ERROR, "fixed-form directive not supported: {detail}"),
    "E101": (Severity.ERROR, "'kernels' has no explicit OpenMP counterpart: {detail}"),
    "E102": (Severity.ERROR, "vector_length has no OpenMP counterpart: {detail}"),
    "E103": (Severity.ERROR, "unbalanced end directive: {detail}"),
    "E301": (Severity.ERROR, "cannot wrap directive: {detail}"),
    "W101": (Severity.WARNING, "'kernels' translated as a target teams region: {detail}"),
    "W102": (Severity.WARNING, "vector_length dropped, no OpenMP counterpart: {detail}"),
    "W103": (Severity.WARNING, "'loop gang' mapped to teams distribute: {detail}"),
    "I201": (Severity.INFO, "schedule clause injected: {detail}"),
}

EXCERPT_WIDTH = 60


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    code: str
    message: str
    file: str = ""
    line: int = 0
    payload_excerpt: str = ""

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def located(self, file: str, line: int, payload: str = "") -> Diagnostic:
        """Return a copy pinned to a source location."""
        return Diagnostic(
            self.severity,
            self.code,
            self.message,
            file,
            line,
            excerpt(payload) if payload else self.payload_excerpt,
        )

    def to_json(self) -> dict[str, Any]:
        return {
            "file": self.file,
            "line": self.line,
            "severity": self.severity.value,
            "code": self.code,
            "message": self.message,
            "excerpt": self.payload_excerpt,
        }

    def __str__(self) -> str:
        loc = f"{self.file}:{self.line}" if self.file else f"line {self.line}"
        text = f"{loc}: {self.severity.value} {self.code}: {self.message}"
        if self.payload_excerpt:
            text += f" [{self.payload_excerpt}]"
        return text


def excerpt(payload: str) -> str:
    return payload[:EXCERPT_WIDTH]


def diagnostic(code: str, detail: str = "", *, file: str = "", line: int = 0,
               payload: str = "") -> Diagnostic:
    severity, template = CATALOG[code]
    return Diagnostic(severity, code, template.format(detail=detail), file, line,
                      excerpt(payload))


class DirectiveError(ValueError):
    """A single directive could not be scanned, parsed or emitted."""

    def __init__(self, code: str, detail: str) -> None:
        self.code = code
        self.detail = detail
        # construct kind, when the failure came after the construct was recognized
        self.kind = None
        super().__init__(f"{code}: {CATALOG[code][1].format(detail=detail)}")

    def to_diagnostic(self, *, file: str = "", line: int = 0, payload: str = "") -> Diagnostic:
        return diagnostic(self.code, self.detail, file=file, line=line, payload=payload)


class DiagnosticError(Exception):
    """Raised by whole-unit operations that found at least one error."""

    def __init__(self, diagnostics: list[Diagnostic]) -> None:
        self.diagnostics = diagnostics
        errors = [d for d in diagnostics if d.is_error]
        head = str(errors[0]) if errors else "no errors"
        more = f" (+{len(errors) - 1} more)" if len(errors) > 1 else ""
        super().__init__(head + more)


def has_errors(diagnostics: list[Diagnostic]) -> bool:
    return any(d.is_error for d in diagnostics)
