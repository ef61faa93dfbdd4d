"""Directive emission, in-place rewriting and ACC/OMP pair verification."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from itertools import zip_longest

from .diagnostics import (
    Diagnostic,
    DiagnosticError,
    DirectiveError,
    Severity,
    has_errors,
)
from .directives import AccDirective, Clause, OmpDirective, parse_acc, parse_omp
from .mapping import OPENERS, ConstructStack, MappingConfig, map_directive, unclosed_regions
from .source import BOM, Dialect, DirectiveLine, SourceUnit, scan_directives, scan_unit

DEFAULT_WRAP_WIDTH = {Dialect.FORTRAN: 132, Dialect.C: 120}
MIN_WRAP_WIDTH = 40


def _wrap(tokens: list[str], first_prefix: str, cont_prefix: str, tail: str,
          wrap_width: int) -> list[str]:
    if wrap_width < MIN_WRAP_WIDTH:
        raise ValueError(f"wrap_width must be >= {MIN_WRAP_WIDTH}, got {wrap_width}")
    single = first_prefix + " ".join(tokens)
    if len(single) <= wrap_width:
        return [single]
    lines: list[str] = []
    prefix, cur = first_prefix, []
    for k, tok in enumerate(tokens):
        end = "" if k == len(tokens) - 1 else tail
        if len(prefix + " ".join(cur + [tok]) + end) <= wrap_width:
            cur.append(tok)
            continue
        if cur:
            lines.append(prefix + " ".join(cur) + tail)
            prefix, cur = cont_prefix, []
        if len(prefix + tok + end) > wrap_width:
            raise DirectiveError("E301", f"{tok!r} does not fit in {wrap_width} columns")
        cur = [tok]
    lines.append(prefix + " ".join(cur))
    return lines


def _emit(model: str, words: str, clauses, dialect: Dialect, indent: str,
          wrap_width: int | None) -> list[str]:
    width = DEFAULT_WRAP_WIDTH[dialect] if wrap_width is None else wrap_width
    tokens = words.split() + [str(c) for c in clauses]
    if dialect is Dialect.FORTRAN:
        sentinel = f"!${model}"
        return _wrap(tokens, f"{indent}{sentinel} ", f"{indent}{sentinel} ", " &", width)
    return _wrap(tokens, f"{indent}#pragma {model} ", f"{indent}    ", " \\", width)


def emit_omp(d: OmpDirective, dialect: Dialect | str = Dialect.FORTRAN, indent: str = "",
             wrap_width: int | None = None) -> list[str]:
    """Render ``d`` as one or more physical source lines.

    Long directives are split at token boundaries with the dialect's
    continuation syntax.  Raises :class:`DirectiveError` (E301) when a single
    clause cannot fit in ``wrap_width`` columns.
    """
    dialect = Dialect(dialect)
    if dialect is Dialect.C and d.kind.is_end:
        raise ValueError(f"{d.kind.value!r} has no C spelling")
    return _emit("omp", d.kind.spelling(dialect), d.clauses, dialect, indent, wrap_width)


def emit_acc(d: AccDirective, dialect: Dialect | str = Dialect.FORTRAN, indent: str = "",
             wrap_width: int | None = None) -> list[str]:
    dialect = Dialect(dialect)
    if dialect is Dialect.C and d.kind.is_end:
        raise ValueError(f"{d.kind.value!r} has no C spelling")
    return _emit("acc", d.kind.value, d.clauses, dialect, indent, wrap_width)


def payload_of(lines: list[str], dialect: Dialect | str = Dialect.FORTRAN) -> str:
    """Join emitted lines back into a single payload (via the scanner)."""
    unit = SourceUnit.from_text("\n".join(lines), dialect, "<emitted>")
    (found,) = scan_directives(unit)
    return found.payload


@dataclass(frozen=True)
class Edit:
    directive: DirectiveLine
    replacement: tuple[str, ...]


@dataclass
class RewritePlan:
    unit: SourceUnit
    edits: list[Edit] = field(default_factory=list)
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not has_errors(self.diagnostics)

    def output_lines(self) -> list[str]:
        out: list[str] = []
        pos = 0
        for e in self.edits:
            out += self.unit.lines[pos:e.directive.start_line - 1]
            out += self._dressed(e)
            pos = e.directive.end_line
        out += self.unit.lines[pos:]
        return out

    def _dressed(self, e: Edit) -> list[str]:
        lines = list(e.replacement)
        first = self.unit.lines[e.directive.start_line - 1]
        # keep a stray CR from an LF file, and a BOM on line 1
        if first.endswith("\r"):
            lines = [ln + "\r" for ln in lines]
        if e.directive.start_line == 1 and first.startswith(BOM):
            lines[0] = BOM + lines[0]
        return lines

    def output_text(self) -> str:
        return self.unit.newline_style.value.join(self.output_lines())

    def restore(self, output_text: str) -> str:
        """Undo the edits on ``output_text``, yielding the original text."""
        lines = output_text.split(self.unit.newline_style.value)
        out: list[str] = []
        pos = orig = 0
        for e in self.edits:
            gap = e.directive.start_line - 1 - orig
            out += lines[pos:pos + gap]
            out += e.directive.raw_lines
            pos += gap + len(e.replacement)
            orig = e.directive.end_line
        out += lines[pos:]
        return self.unit.newline_style.value.join(out)


def _hold_region(stack: ConstructStack, exc: DirectiveError, dialect: Dialect, line: int) -> None:
    # keep a region whose opener failed to parse on the stack, so its end
    # directive is not reported a second time as unbalanced
    if exc.kind in OPENERS and dialect is Dialect.FORTRAN:
        stack.push(exc.kind, None, line)


def plan_unit(unit: SourceUnit, config: MappingConfig = MappingConfig(),
              wrap_width: int | None = None) -> RewritePlan:
    """Scan, parse, map and emit every OpenACC directive of ``unit``."""
    found, diags = scan_unit(unit)
    plan = RewritePlan(unit, diagnostics=diags)
    stack = ConstructStack()
    for dl in found:
        if not dl.sentinel.is_acc:
            continue
        where = dict(file=unit.path, line=dl.start_line, payload=dl.payload)
        try:
            acc = parse_acc(dl.payload, unit.dialect)
        except DirectiveError as exc:
            plan.diagnostics.append(exc.to_diagnostic(**where))
            _hold_region(stack, exc, unit.dialect, dl.start_line)
            continue
        omp, ds = map_directive(acc, stack, config, unit.dialect, line=dl.start_line)
        plan.diagnostics += [d.located(**where) for d in ds]
        if omp is None:
            continue
        try:
            lines = emit_omp(omp, unit.dialect, dl.indent, wrap_width)
        except DirectiveError as exc:
            plan.diagnostics.append(exc.to_diagnostic(**where))
            continue
        plan.edits.append(Edit(dl, tuple(lines)))
    plan.diagnostics += [d.located(unit.path, d.line) for d in unclosed_regions(stack)]
    plan.diagnostics.sort(key=lambda d: d.line)
    return plan


def translate_unit(unit: SourceUnit, config: MappingConfig = MappingConfig(),
                   wrap_width: int | None = None) -> tuple[str | None, list[Diagnostic]]:
    """Translate a whole unit.

    Returns ``(text, diagnostics)``.  ``text`` is None when any error was
    reported, or any warning under ``config.fail_on_warning``; a unit is
    never half translated.
    """
    plan = plan_unit(unit, config, wrap_width)
    blocked = not plan.ok or (
        config.fail_on_warning
        and any(d.severity is Severity.WARNING for d in plan.diagnostics))
    if blocked:
        return None, plan.diagnostics
    if not plan.edits:
        return unit.text, plan.diagnostics
    return plan.output_text(), plan.diagnostics


# -- pair verification --------------------------------------------------------

_WS = re.compile(r"\s+")


def clause_key(c: Clause) -> str:
    return _WS.sub("", str(c))


def directive_sequence(unit: SourceUnit, config: MappingConfig = MappingConfig(),
                       ) -> list[tuple[int, OmpDirective]]:
    """OpenMP view of every directive in ``unit``.

    OpenACC directives are mapped, OpenMP ones parsed as they stand.
    Raises :class:`DiagnosticError` if anything fails to parse or map.
    """
    found = scan_directives(unit)
    stack = ConstructStack()
    seq: list[tuple[int, OmpDirective]] = []
    diags: list[Diagnostic] = []
    for dl in found:
        where = dict(file=unit.path, line=dl.start_line, payload=dl.payload)
        try:
            if dl.sentinel.is_omp:
                seq.append((dl.start_line, parse_omp(dl.payload, unit.dialect)))
                continue
            acc = parse_acc(dl.payload, unit.dialect)
        except DirectiveError as exc:
            diags.append(exc.to_diagnostic(**where))
            _hold_region(stack, exc, unit.dialect, dl.start_line)
            continue
        omp, ds = map_directive(acc, stack, config, unit.dialect, line=dl.start_line)
        diags += [d.located(**where) for d in ds]
        if omp is not None:
            seq.append((dl.start_line, omp))
    diags += [d.located(unit.path, d.line) for d in unclosed_regions(stack)]
    if has_errors(diags):
        raise DiagnosticError(diags)
    return seq


@dataclass(frozen=True)
class PositionResult:
    index: int
    acc_line: int | None
    omp_line: int | None
    acc: OmpDirective | None
    omp: OmpDirective | None
    only_acc: tuple[Clause, ...] = ()
    only_omp: tuple[Clause, ...] = ()

    @property
    def kind_match(self) -> bool:
        return self.acc is not None and self.omp is not None and self.acc.kind is self.omp.kind

    @property
    def matched(self) -> bool:
        return self.kind_match and not self.only_acc and not self.only_omp


@dataclass(frozen=True)
class EquivalenceReport:
    acc_path: str
    omp_path: str
    positions: tuple[PositionResult, ...]

    @property
    def match(self) -> bool:
        return all(p.matched for p in self.positions)

    @property
    def mismatches(self) -> int:
        return sum(not p.matched for p in self.positions)

    def render(self, dialect: Dialect = Dialect.FORTRAN) -> str:
        out = [f"verify {self.acc_path} against {self.omp_path}"]
        for p in self.positions:
            status = "match" if p.matched else "MISMATCH"
            where = f"{p.acc_line or '-'}:{p.omp_line or '-'}"
            kind = (p.omp or p.acc).kind.spelling(dialect)
            line = f"  [{p.index}] {where} {status} {kind}"
            if not p.kind_match:
                left = p.acc.kind.spelling(dialect) if p.acc else "<none>"
                right = p.omp.kind.spelling(dialect) if p.omp else "<none>"
                line += f" (translated: {left}; expected: {right})"
            if p.only_acc:
                line += " only in translation: " + " ".join(map(str, p.only_acc))
            if p.only_omp:
                line += " only in OpenMP file: " + " ".join(map(str, p.only_omp))
            out.append(line)
        verdict = "MATCH" if self.match else "MISMATCH"
        out.append(f"{verdict}: {len(self.positions)} directive positions, "
                   f"{self.mismatches} mismatches")
        return "\n".join(out)


def _clause_diff(left: OmpDirective, right: OmpDirective):
    lk = Counter(clause_key(c) for c in left.clauses)
    rk = Counter(clause_key(c) for c in right.clauses)

    def pick(clauses, extra: Counter):
        out = []
        for c in clauses:
            k = clause_key(c)
            if extra[k] > 0:
                out.append(c)
                extra[k] -= 1
        return tuple(out)

    return pick(left.clauses, lk - rk), pick(right.clauses, rk - lk)


def verify_pair(acc_unit: SourceUnit, omp_unit: SourceUnit,
                config: MappingConfig = MappingConfig()) -> EquivalenceReport:
    """Compare the translation of ``acc_unit`` with ``omp_unit`` directive by directive.

    Clause order is ignored; variable order inside a clause is not.  Host
    code is ignored entirely.
    """
    left = directive_sequence(acc_unit, config)
    right = directive_sequence(omp_unit, config)
    positions = []
    for i, (a, b) in enumerate(zip_longest(left, right)):
        a_line, a_dir = a if a else (None, None)
        b_line, b_dir = b if b else (None, None)
        only_a: tuple[Clause, ...] = ()
        only_b: tuple[Clause, ...] = ()
        if a_dir is not None and b_dir is not None:
            only_a, only_b = _clause_diff(a_dir, b_dir)
        positions.append(PositionResult(i, a_line, b_line, a_dir, b_dir, only_a, only_b))
    return EquivalenceReport(acc_unit.path, omp_unit.path, tuple(positions))
