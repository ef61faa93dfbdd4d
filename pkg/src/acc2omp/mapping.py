"""OpenACC to OpenMP directive mapping.

The rule set is a fixed one-to-one table: each OpenACC construct maps to a
single OpenMP construct and each clause is renamed, kept, absorbed into the
construct, or dropped with a diagnostic.  Nothing is dropped silently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .diagnostics import Diagnostic, diagnostic
from .directives import (
    AccDirective,
    AccKind,
    Clause,
    IntExpr,
    MapList,
    OmpDirective,
    OMP_ALLOWED,
    OmpKind,
    SchedulePair,
    VarList,
)
from .source import Dialect


class KernelsPolicy(str, Enum):
    STRICT = "strict"
    TARGET_TEAMS = "target-teams"


INJECTABLE_SCHEDULES = frozenset({"static", "dynamic", "guided"})


@dataclass(frozen=True)
class MappingConfig:
    kernels_policy: KernelsPolicy = KernelsPolicy.STRICT
    inject_schedule: tuple[str, str] | None = None
    drop_vector_length: bool = True
    fail_on_warning: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "kernels_policy", KernelsPolicy(self.kernels_policy))
        if self.inject_schedule is not None:
            kind, chunk = self.inject_schedule
            if kind not in INJECTABLE_SCHEDULES:
                raise ValueError(f"schedule kind must be one of {sorted(INJECTABLE_SCHEDULES)}, "
                                 f"got {kind!r}")
            if not str(chunk).strip():
                raise ValueError("schedule chunk must be a nonempty expression")
            object.__setattr__(self, "inject_schedule", (kind, str(chunk).strip()))

    @property
    def schedule_clause(self) -> Clause | None:
        if self.inject_schedule is None:
            return None
        kind, chunk = self.inject_schedule
        return Clause("schedule", SchedulePair(kind, chunk))


COMBINED = OmpKind.TARGET_TEAMS_DISTRIBUTE_PARALLEL_LOOP_SIMD

_DATA_MAP_KINDS = {"copyin": "to", "copyout": "from", "copy": "tofrom", "create": "alloc"}
_RENAMED = {"num_gangs": "num_teams", "num_workers": "num_threads"}
_IDENTITY = frozenset({"reduction", "collapse", "private", "firstprivate"})
ABSORBED = frozenset({"gang", "worker", "vector"})

_END_OF = {
    OmpKind.TARGET_TEAMS: OmpKind.END_TARGET_TEAMS,
    COMBINED: OmpKind.END_TARGET_TEAMS_DISTRIBUTE_PARALLEL_LOOP_SIMD,
    OmpKind.TARGET_DATA: OmpKind.END_TARGET_DATA,
}

# which openers each OpenACC end directive may close
_CLOSES = {
    AccKind.END_PARALLEL: frozenset({AccKind.PARALLEL, AccKind.PARALLEL_LOOP}),
    AccKind.END_KERNELS: frozenset({AccKind.KERNELS, AccKind.KERNELS_LOOP}),
    AccKind.END_DATA: frozenset({AccKind.DATA}),
}
OPENERS = frozenset({AccKind.PARALLEL, AccKind.PARALLEL_LOOP, AccKind.KERNELS,
                     AccKind.KERNELS_LOOP, AccKind.DATA})
# combined loop constructs may omit their end directive
_IMPLICITLY_CLOSED = frozenset({AccKind.PARALLEL_LOOP, AccKind.KERNELS_LOOP})


@dataclass(frozen=True)
class StackEntry:
    acc_kind: AccKind
    omp_kind: OmpKind | None  # None when the opener itself failed to map
    line: int


@dataclass
class ConstructStack:
    entries: list[StackEntry] = field(default_factory=list)

    def push(self, acc_kind: AccKind, omp_kind: OmpKind | None, line: int) -> None:
        if acc_kind not in OPENERS:
            raise ValueError(f"{acc_kind.value!r} does not open a region")
        self.entries.append(StackEntry(acc_kind, omp_kind, line))

    def top(self) -> StackEntry | None:
        return self.entries[-1] if self.entries else None

    def pop(self) -> StackEntry:
        return self.entries.pop()

    def close_open_loops(self) -> None:
        """Discard trailing combined-loop openers whose end was omitted."""
        while self.entries and self.entries[-1].acc_kind in _IMPLICITLY_CLOSED:
            self.entries.pop()

    def __len__(self) -> int:
        return len(self.entries)


def map_clause(c: Clause, target_kind: OmpKind, config: MappingConfig = MappingConfig(),
               ) -> tuple[list[Clause], list[Diagnostic]]:
    """Translate one OpenACC clause for a directive of ``target_kind``.

    The rules do not depend on ``target_kind``; the mapped clause is checked
    against what that OpenMP construct accepts.
    """
    if c.name in _DATA_MAP_KINDS:
        assert isinstance(c.args, VarList)
        out = Clause("map", MapList(_DATA_MAP_KINDS[c.name], c.args.names))
    elif c.name in _RENAMED:
        out = Clause(_RENAMED[c.name], c.args)
    elif c.name in _IDENTITY:
        out = c
    else:
        out = None
    if out is not None:
        if out.name not in OMP_ALLOWED[target_kind]:
            raise ValueError(f"{c.name!r} maps to {out.name!r}, not valid on {target_kind.value!r}")
        return [out], []
    if c.name in ABSORBED:
        return [], []
    if c.name == "vector_length":
        assert isinstance(c.args, IntExpr)
        code = "W102" if config.drop_vector_length else "E102"
        return [], [diagnostic(code, f"vector_length({c.args.text})")]
    raise ValueError(f"no mapping rule for clause {c.name!r}")


def _map_clauses(d: AccDirective, target: OmpKind, config: MappingConfig):
    clauses: list[Clause] = []
    diags: list[Diagnostic] = []
    for c in d.clauses:
        out, ds = map_clause(c, target, config)
        clauses += out
        diags += ds
    return clauses, diags


def _loop_target(d: AccDirective) -> tuple[OmpKind, list[Diagnostic]]:
    levels = {c.name for c in d.clauses} & ABSORBED
    if "gang" in levels:
        return OmpKind.TEAMS_DISTRIBUTE, [diagnostic(
            "W103", "teams-level worksharing, review the number of teams")]
    if levels:
        return OmpKind.PARALLEL_SIMD, []
    return OmpKind.TEAMS_DISTRIBUTE, []


def map_directive(d: AccDirective, stack: ConstructStack, config: MappingConfig = MappingConfig(),
                  dialect: Dialect | str = Dialect.FORTRAN, *, line: int = 0,
                  ) -> tuple[OmpDirective | None, list[Diagnostic]]:
    """Map ``d`` given the regions opened so far.

    Returns the OpenMP directive (or None) and the diagnostics raised while
    mapping.  A None directive always comes with at least one error.
    Diagnostics carry no location; callers pin them with
    :meth:`Diagnostic.located`.
    """
    dialect = Dialect(dialect)
    kind = d.kind
    if kind.is_end:
        return _map_end(d, stack)

    diags: list[Diagnostic] = []
    if kind in (AccKind.KERNELS, AccKind.KERNELS_LOOP):
        if config.kernels_policy is KernelsPolicy.STRICT:
            if dialect is Dialect.FORTRAN:
                stack.push(kind, None, line)
            return None, [diagnostic("E101", f"{kind.value!r} under the strict kernels policy")]
        diags.append(diagnostic("W101", f"{kind.value!r}"))

    if kind in (AccKind.PARALLEL, AccKind.KERNELS):
        target = OmpKind.TARGET_TEAMS
    elif kind in (AccKind.PARALLEL_LOOP, AccKind.KERNELS_LOOP):
        target = COMBINED
    elif kind is AccKind.DATA:
        target = OmpKind.TARGET_DATA
    else:
        target, extra = _loop_target(d)
        diags += extra

    clauses, clause_diags = _map_clauses(d, target, config)
    diags += clause_diags
    if target is COMBINED and config.schedule_clause is not None:
        clauses.append(config.schedule_clause)
        diags.append(diagnostic("I201", str(config.schedule_clause)))

    # C pragmas bind to the next statement; only Fortran regions have ends
    if kind in OPENERS and dialect is Dialect.FORTRAN:
        stack.push(kind, target, line)
    if any(x.is_error for x in diags):
        return None, diags
    return OmpDirective(target, tuple(clauses)), diags


def _map_end(d: AccDirective, stack: ConstructStack):
    closes = _CLOSES[d.kind]
    while stack.top() is not None and stack.top().acc_kind not in closes \
            and stack.top().acc_kind in _IMPLICITLY_CLOSED:
        stack.pop()
    top = stack.top()
    if top is None:
        return None, [diagnostic("E103", f"{d.kind.value!r} with no open region")]
    if top.acc_kind not in closes:
        return None, [diagnostic(
            "E103", f"{d.kind.value!r} does not match {top.acc_kind.value!r} opened at line {top.line}")]
    stack.pop()
    if top.omp_kind is None:
        if top.acc_kind in (AccKind.KERNELS, AccKind.KERNELS_LOOP):
            return None, [diagnostic("E101", f"{d.kind.value!r} closes an untranslated kernels region")]
        return None, [diagnostic(
            "E103", f"{d.kind.value!r} closes {top.acc_kind.value!r} at line {top.line}, "
                    "which failed to translate")]
    return OmpDirective(_END_OF[top.omp_kind]), []


def unclosed_regions(stack: ConstructStack) -> list[Diagnostic]:
    """Diagnostics for regions still open at end of file."""
    stack.close_open_loops()
    out = [diagnostic("E103", f"{e.acc_kind.value!r} is never closed", line=e.line)
           for e in stack.entries]
    stack.entries.clear()
    return out
