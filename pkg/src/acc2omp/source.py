"""Source units and the directive sentinel scanner.

A :class:`SourceUnit` keeps a file as a list of physical lines so that it
can be written back byte for byte.  :func:`scan_directives` walks those
lines and groups continuation lines into :class:`DirectiveLine` records.
Host code is never tokenized; a line is a directive only when its first
non-blank characters are a sentinel.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .diagnostics import Diagnostic, DiagnosticError, diagnostic, has_errors

BOM = "\ufeff"


class Dialect(str, Enum):
    FORTRAN = "fortran"
    C = "c"


class NewlineStyle(str, Enum):
    LF = "\n"
    CRLF = "\r\n"


class Sentinel(str, Enum):
    ACC_FORTRAN = "!$acc"
    ACC_C = "#pragma acc"
    OMP_FORTRAN = "!$omp"
    OMP_C = "#pragma omp"

    @property
    def is_acc(self) -> bool:
        return self in (Sentinel.ACC_FORTRAN, Sentinel.ACC_C)

    @property
    def is_omp(self) -> bool:
        return not self.is_acc


_SUFFIX_DIALECT = {
    ".f90": Dialect.FORTRAN,
    ".f95": Dialect.FORTRAN,
    ".f03": Dialect.FORTRAN,
    ".f08": Dialect.FORTRAN,
    ".c": Dialect.C,
    ".h": Dialect.C,
}


def dialect_for_path(path: str | Path) -> Dialect | None:
    return _SUFFIX_DIALECT.get(Path(path).suffix.lower())


@dataclass(frozen=True)
class SourceUnit:
    path: str
    dialect: Dialect
    lines: tuple[str, ...]
    newline_style: NewlineStyle = NewlineStyle.LF

    @classmethod
    def from_text(cls, text: str, dialect: Dialect | str | None = None,
                  path: str = "<string>") -> SourceUnit:
        if dialect is None:
            dialect = dialect_for_path(path)
            if dialect is None:
                raise ValueError(f"cannot infer dialect of {path!r}; pass it explicitly")
        dialect = Dialect(dialect)
        # CRLF only when every LF is part of a CRLF pair; otherwise stray CRs
        # stay inside the lines and round-trip untouched.
        if "\r\n" in text and text.count("\n") == text.count("\r\n"):
            style = NewlineStyle.CRLF
        else:
            style = NewlineStyle.LF
        return cls(path, dialect, tuple(text.split(style.value)), style)

    @classmethod
    def read(cls, path: str | Path, dialect: Dialect | str | None = None) -> SourceUnit:
        raw = Path(path).read_bytes()
        return cls.from_text(raw.decode("utf-8"), dialect, str(path))

    @property
    def text(self) -> str:
        return self.newline_style.value.join(self.lines)

    def to_bytes(self) -> bytes:
        return self.text.encode("utf-8")


@dataclass(frozen=True)
class DirectiveLine:
    """One logical directive, possibly spread over several physical lines."""

    unit: SourceUnit = field(repr=False, compare=False)
    start_line: int
    line_span: int
    sentinel: Sentinel
    payload: str
    indent: str = ""

    @property
    def end_line(self) -> int:
        return self.start_line + self.line_span - 1

    @property
    def raw_lines(self) -> tuple[str, ...]:
        return self.unit.lines[self.start_line - 1:self.end_line]


_FORTRAN_SENTINEL = re.compile(r"!\$(acc|omp)(?![A-Za-z0-9_$])", re.IGNORECASE)
_C_SENTINEL = re.compile(r"#[ \t]*pragma[ \t]+(acc|omp)(?![A-Za-z0-9_])")
_FIXED_FORM = re.compile(r"[cC*]\$(acc|omp)(?![A-Za-z0-9_$])", re.IGNORECASE)
_C_BLOCK_COMMENT = re.compile(r"/\*.*?\*/")

_SENTINELS = {
    (Dialect.FORTRAN, "acc"): Sentinel.ACC_FORTRAN,
    (Dialect.FORTRAN, "omp"): Sentinel.OMP_FORTRAN,
    (Dialect.C, "acc"): Sentinel.ACC_C,
    (Dialect.C, "omp"): Sentinel.OMP_C,
}


def _body(unit: SourceUnit, index: int) -> str:
    line = unit.lines[index]
    if index == 0 and line.startswith(BOM):
        line = line[1:]
    return line.rstrip("\r")


def _match_sentinel(dialect: Dialect, line: str):
    stripped = line.lstrip(" \t")
    pattern = _FORTRAN_SENTINEL if dialect is Dialect.FORTRAN else _C_SENTINEL
    m = pattern.match(stripped)
    if m is None:
        return None
    return _SENTINELS[dialect, m.group(1).lower()], line[:len(line) - len(stripped)], stripped[m.end():]


def _strip_fortran_comment(text: str) -> str:
    cut = text.find("!")
    return text if cut < 0 else text[:cut]


def _strip_c_comment(text: str) -> str:
    text = _C_BLOCK_COMMENT.sub(" ", text)
    cut = text.find("//")
    return text if cut < 0 else text[:cut]


def _at_eof(unit: SourceUnit, index: int) -> bool:
    # a trailing newline leaves one empty element after the last real line
    n = len(unit.lines)
    return index >= n or (index == n - 1 and unit.lines[index] == "")


def scan_unit(unit: SourceUnit) -> tuple[list[DirectiveLine], list[Diagnostic]]:
    """Scan without raising; malformed directives become diagnostics."""
    found: list[DirectiveLine] = []
    diags: list[Diagnostic] = []
    n = len(unit.lines)
    i = 0
    while i < n:
        line = _body(unit, i)
        if unit.dialect is Dialect.FORTRAN and _FIXED_FORM.match(line):
            diags.append(diagnostic("E008", "sentinel in column 1 of a fixed-form line",
                                    file=unit.path, line=i + 1, payload=line.strip()))
            i += 1
            continue
        hit = _match_sentinel(unit.dialect, line)
        if hit is None:
            i += 1
            continue
        sentinel, indent, rest = hit
        start = i
        if unit.dialect is Dialect.FORTRAN:
            parts, i, error = _join_fortran(unit, i, sentinel, rest)
        else:
            parts, i, error = _join_c(unit, i, rest)
        payload = " ".join(p for p in parts if p)
        if error:
            diags.append(diagnostic("E001", error, file=unit.path, line=start + 1,
                                    payload=payload))
            continue
        found.append(DirectiveLine(unit, start + 1, i - start, sentinel, payload, indent))
    return found, diags


def _join_fortran(unit: SourceUnit, i: int, sentinel: Sentinel, rest: str):
    parts: list[str] = []
    first = True
    while True:
        text = _strip_fortran_comment(rest).strip()
        if not first and text.startswith("&"):
            text = text[1:].lstrip()
        first = False
        if not text.endswith("&"):
            parts.append(text)
            return parts, i + 1, None
        parts.append(text[:-1].strip())
        i += 1
        nxt = None if _at_eof(unit, i) else _match_sentinel(unit.dialect, _body(unit, i))
        if nxt is None or nxt[0] is not sentinel:
            where = "end of file" if _at_eof(unit, i) else f"line {i + 1}"
            return parts, i, f"line ends with '&' but {where} does not continue with {sentinel.value}"
        rest = nxt[2]


def _join_c(unit: SourceUnit, i: int, rest: str):
    parts: list[str] = []
    while True:
        text = rest.rstrip()
        if not text.endswith("\\"):
            parts.append(_strip_c_comment(text).strip())
            return parts, i + 1, None
        parts.append(_strip_c_comment(text[:-1]).strip())
        i += 1
        if _at_eof(unit, i):
            return parts, i, "backslash continuation at end of file"
        rest = _body(unit, i)


def scan_directives(unit: SourceUnit) -> list[DirectiveLine]:
    """Return every ACC and OMP directive of ``unit`` in source order.

    Raises :class:`DiagnosticError` on malformed continuations (E001) or
    fixed-form sentinels (E008).
    """
    found, diags = scan_unit(unit)
    if has_errors(diags):
        raise DiagnosticError(diags)
    return found
