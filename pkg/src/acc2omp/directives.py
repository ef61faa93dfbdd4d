"""Directive ASTs and the OpenACC / OpenMP payload parsers.

A payload is the directive text after the sentinel, e.g.
``"parallel loop collapse(2) reduction(max:max_err)"``.  Keywords are
case-insensitive and stored lowercase; identifiers and expressions are kept
as written.  Expression arguments are never evaluated.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Union

from .diagnostics import DirectiveError
from .source import Dialect


@dataclass(frozen=True)
class VarList:
    names: tuple[str, ...]


@dataclass(frozen=True)
class Reduction:
    operator: str
    names: tuple[str, ...]


@dataclass(frozen=True)
class IntExpr:
    text: str


@dataclass(frozen=True)
class MapList:
    kind: str
    names: tuple[str, ...]


@dataclass(frozen=True)
class SchedulePair:
    kind: str
    chunk: str | None = None


ClauseArgs = Union[VarList, Reduction, IntExpr, MapList, SchedulePair, None]


@dataclass(frozen=True)
class Clause:
    name: str
    args: ClauseArgs = None

    def __str__(self) -> str:
        a = self.args
        if a is None:
            return self.name
        if isinstance(a, VarList):
            inner = ", ".join(a.names)
        elif isinstance(a, Reduction):
            inner = f"{a.operator}:{', '.join(a.names)}"
        elif isinstance(a, MapList):
            inner = f"{a.kind}:{', '.join(a.names)}"
        elif isinstance(a, SchedulePair):
            inner = a.kind if a.chunk is None else f"{a.kind},{a.chunk}"
        else:
            inner = a.text
        return f"{self.name}({inner})"


class AccKind(Enum):
    PARALLEL = "parallel"
    PARALLEL_LOOP = "parallel loop"
    KERNELS = "kernels"
    KERNELS_LOOP = "kernels loop"
    LOOP = "loop"
    DATA = "data"
    END_PARALLEL = "end parallel"
    END_KERNELS = "end kernels"
    END_DATA = "end data"

    @property
    def is_end(self) -> bool:
        return self.name.startswith("END_")


class OmpKind(Enum):
    TARGET_TEAMS = "target teams"
    TARGET_TEAMS_DISTRIBUTE_PARALLEL_LOOP_SIMD = "target teams distribute parallel {loop} simd"
    TEAMS_DISTRIBUTE = "teams distribute"
    PARALLEL_SIMD = "parallel {loop} simd"
    TARGET_DATA = "target data"
    END_TARGET_TEAMS = "end target teams"
    END_TARGET_TEAMS_DISTRIBUTE_PARALLEL_LOOP_SIMD = "end target teams distribute parallel {loop} simd"
    END_TARGET_DATA = "end target data"

    @property
    def is_end(self) -> bool:
        return self.name.startswith("END_")

    def spelling(self, dialect: Dialect) -> str:
        return self.value.format(loop="do" if dialect is Dialect.FORTRAN else "for")


@dataclass(frozen=True)
class AccDirective:
    kind: AccKind
    clauses: tuple[Clause, ...] = ()


@dataclass(frozen=True)
class OmpDirective:
    kind: OmpKind
    clauses: tuple[Clause, ...] = ()


# Argument shape of every clause name either model knows.
_VARLIST, _REDUCTION, _EXPR, _MAP, _SCHEDULE, _BARE = range(6)

ACC_CLAUSE_SHAPES = {
    "gang": _BARE,
    "worker": _BARE,
    "vector": _BARE,
    "collapse": _EXPR,
    "reduction": _REDUCTION,
    "private": _VARLIST,
    "firstprivate": _VARLIST,
    "num_gangs": _EXPR,
    "num_workers": _EXPR,
    "vector_length": _EXPR,
    "copyin": _VARLIST,
    "copyout": _VARLIST,
    "copy": _VARLIST,
    "create": _VARLIST,
}

OMP_CLAUSE_SHAPES = {
    "map": _MAP,
    "num_teams": _EXPR,
    "num_threads": _EXPR,
    "reduction": _REDUCTION,
    "collapse": _EXPR,
    "private": _VARLIST,
    "firstprivate": _VARLIST,
    "schedule": _SCHEDULE,
}

_DATA = frozenset({"copyin", "copyout", "copy", "create"})
_COMPUTE = frozenset({"num_gangs", "num_workers", "vector_length", "reduction",
                      "private", "firstprivate"}) | _DATA
_LOOP_LEVELS = frozenset({"gang", "worker", "vector", "collapse", "reduction", "private"})

ACC_ALLOWED: dict[AccKind, frozenset[str]] = {
    AccKind.PARALLEL: _COMPUTE,
    AccKind.KERNELS: _COMPUTE,
    AccKind.PARALLEL_LOOP: frozenset(ACC_CLAUSE_SHAPES),
    AccKind.KERNELS_LOOP: frozenset(ACC_CLAUSE_SHAPES),
    AccKind.LOOP: _LOOP_LEVELS,
    AccKind.DATA: _DATA,
    AccKind.END_PARALLEL: frozenset(),
    AccKind.END_KERNELS: frozenset(),
    AccKind.END_DATA: frozenset(),
}

_PRIVATIZING = frozenset({"reduction", "private", "firstprivate"})

OMP_ALLOWED: dict[OmpKind, frozenset[str]] = {
    OmpKind.TARGET_TEAMS: _PRIVATIZING | {"num_teams", "num_threads", "map"},
    OmpKind.TARGET_TEAMS_DISTRIBUTE_PARALLEL_LOOP_SIMD: frozenset(OMP_CLAUSE_SHAPES),
    OmpKind.TEAMS_DISTRIBUTE: _PRIVATIZING | {"num_teams", "collapse"},
    OmpKind.PARALLEL_SIMD: _PRIVATIZING | {"num_threads", "collapse"},
    OmpKind.TARGET_DATA: frozenset({"map"}),
    OmpKind.END_TARGET_TEAMS: frozenset(),
    OmpKind.END_TARGET_TEAMS_DISTRIBUTE_PARALLEL_LOOP_SIMD: frozenset(),
    OmpKind.END_TARGET_DATA: frozenset(),
}

REDUCTION_OPERATORS = frozenset({"+", "*", "max", "min", "iand", "ior", "ieor", ".and.", ".or."})
_C_REDUCTION_OPERATORS = frozenset({"&", "|", "^", "&&", "||"})
MAP_KINDS = frozenset({"to", "from", "tofrom", "alloc"})
SCHEDULE_KINDS = frozenset({"static", "dynamic", "guided", "auto", "runtime"})

_ACC_CONSTRUCTS: dict[tuple[str, ...], AccKind] = {
    tuple(k.value.split()): k for k in AccKind
}
_ACC_CONSTRUCTS[("end", "parallel", "loop")] = AccKind.END_PARALLEL
_ACC_CONSTRUCTS[("end", "kernels", "loop")] = AccKind.END_KERNELS
_ACC_WORDS = frozenset(w for key in _ACC_CONSTRUCTS for w in key)


def _omp_constructs(dialect: Dialect) -> dict[tuple[str, ...], OmpKind]:
    table = {tuple(k.spelling(dialect).split()): k for k in OmpKind}
    table[("parallel", "simd")] = OmpKind.PARALLEL_SIMD
    if dialect is Dialect.C:
        # a pragma applies to the next statement; C has no end directives
        table = {key: k for key, k in table.items() if not k.is_end}
    return table


_OMP_CONSTRUCTS = {d: _omp_constructs(d) for d in Dialect}
_OMP_WORDS = frozenset(w for t in _OMP_CONSTRUCTS.values() for key in t for w in key)
_ACC_CONSTRUCTS_C = {key: k for key, k in _ACC_CONSTRUCTS.items() if not k.is_end}

_WORD = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NAME_ITEM = re.compile(r"[A-Za-z_][A-Za-z0-9_%]*\s*([(\[].*[)\]])?", re.DOTALL)


def _tokenize(payload: str, bad_code: str) -> list[tuple[str, str | None]]:
    """Split into (word, parenthesised-argument-or-None) pairs."""
    items: list[tuple[str, str | None]] = []
    pos, n = 0, len(payload)
    while pos < n:
        ch = payload[pos]
        if ch.isspace() or ch == ",":
            # commas between clauses are optional
            pos += 1
            continue
        m = _WORD.match(payload, pos)
        if m is None:
            raise DirectiveError(bad_code, f"unexpected {payload[pos:pos + 20]!r}")
        word = m.group(0).lower()
        pos = m.end()
        while pos < n and payload[pos] in " \t":
            pos += 1
        args = None
        if pos < n and payload[pos] == "(":
            close = _matching_paren(payload, pos)
            if close < 0:
                raise DirectiveError(bad_code, f"unbalanced parenthesis after {word!r}")
            args = payload[pos + 1:close]
            pos = close + 1
        items.append((word, args))
    return items


def _matching_paren(text: str, start: int) -> int:
    depth = 0
    for i in range(start, len(text)):
        if text[i] in "([":
            depth += 1
        elif text[i] in ")]":
            depth -= 1
            if depth == 0:
                return i
    return -1


def split_top_level(text: str, sep: str = ",") -> list[str]:
    parts, depth, last = [], 0, 0
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == sep and depth == 0:
            parts.append(text[last:i])
            last = i + 1
    parts.append(text[last:])
    return parts


def _names(text: str, code: str, what: str) -> tuple[str, ...]:
    items = [p.strip() for p in split_top_level(text)]
    if not items or any(not p for p in items):
        raise DirectiveError(code, f"{what}: empty variable list entry in ({text})")
    for p in items:
        if not _NAME_ITEM.fullmatch(p):
            raise DirectiveError(code, f"{what}: {p!r} is not a variable reference")
    return tuple(items)


def _expr(text: str, code: str, what: str) -> str:
    text = text.strip()
    if not text or len(split_top_level(text)) > 1:
        raise DirectiveError(code, f"{what} expects one expression, got ({text})")
    return text


def _clause_args(name: str, shape: int, raw: str | None, code: str,
                 dialect: Dialect) -> ClauseArgs:
    if shape == _BARE:
        if raw is not None:
            raise DirectiveError(code, f"{name} takes no arguments here, got ({raw})")
        return None
    if raw is None:
        raise DirectiveError(code, f"{name} requires arguments")
    if shape == _VARLIST:
        return VarList(_names(raw, code, name))
    if shape == _EXPR:
        return IntExpr(_expr(raw, code, name))
    if shape == _SCHEDULE:
        parts = split_top_level(raw)
        kind = parts[0].strip().lower()
        if kind not in SCHEDULE_KINDS or len(parts) > 2:
            raise DirectiveError(code, f"bad schedule ({raw})")
        chunk = _expr(parts[1], code, "schedule chunk") if len(parts) == 2 else None
        return SchedulePair(kind, chunk)
    head, sep, tail = _split_colon(raw)
    if shape == _REDUCTION:
        op = head.strip().lower()
        ops = REDUCTION_OPERATORS | (_C_REDUCTION_OPERATORS if dialect is Dialect.C else set())
        if not sep or op not in ops:
            raise DirectiveError(code, f"reduction needs 'operator:list', got ({raw})")
        return Reduction(op, _names(tail, code, name))
    # map: a missing map-type means tofrom
    if not sep:
        return MapList("tofrom", _names(raw, code, name))
    kind = head.strip().lower()
    if kind not in MAP_KINDS:
        raise DirectiveError(code, f"unknown map type {head.strip()!r}")
    return MapList(kind, _names(tail, code, name))


def _split_colon(text: str) -> tuple[str, str, str]:
    depth = 0
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == ":" and depth == 0:
            return text[:i], ":", text[i + 1:]
    return text, "", ""


def _parse(payload, dialect, constructs, words, shapes, allowed, codes):
    construct_code, clause_code, args_code = codes
    tokens = _tokenize(payload, args_code)
    n_words = 0
    while (n_words < len(tokens) and tokens[n_words][1] is None
           and tokens[n_words][0] in words):
        n_words += 1
    # construct words and clause names are disjoint, so the whole leading
    # run of construct words must name a construct
    key = tuple(t[0] for t in tokens[:n_words])
    if key not in constructs:
        shown = " ".join(t[0] for t in tokens[:max(n_words, 1)]) or "<empty>"
        raise DirectiveError(construct_code, repr(shown))
    kind = constructs[key]
    clauses = []
    try:
        for name, raw in tokens[len(key):]:
            if name not in shapes:
                raise DirectiveError(clause_code, f"unknown clause {name!r} on {kind.value!r}")
            if name not in allowed[kind]:
                raise DirectiveError(clause_code, f"{name!r} on {kind.value!r}")
            clauses.append(Clause(name, _clause_args(name, shapes[name], raw, args_code, dialect)))
    except DirectiveError as exc:
        exc.kind = kind
        raise
    return kind, tuple(clauses)


def parse_acc(payload: str, dialect: Dialect | str = Dialect.FORTRAN) -> AccDirective:
    """Parse an OpenACC payload.

    Raises :class:`DirectiveError` with code E002 (unknown construct), E003
    (unknown or misplaced clause) or E004 (malformed clause arguments).
    """
    dialect = Dialect(dialect)
    constructs = _ACC_CONSTRUCTS if dialect is Dialect.FORTRAN else _ACC_CONSTRUCTS_C
    kind, clauses = _parse(payload, dialect, constructs, _ACC_WORDS, ACC_CLAUSE_SHAPES,
                           ACC_ALLOWED, ("E002", "E003", "E004"))
    return AccDirective(kind, clauses)


def parse_omp(payload: str, dialect: Dialect | str = Dialect.FORTRAN) -> OmpDirective:
    """Parse an OpenMP payload; error codes E005, E006, E007."""
    dialect = Dialect(dialect)
    kind, clauses = _parse(payload, dialect, _OMP_CONSTRUCTS[dialect], _OMP_WORDS,
                           OMP_CLAUSE_SHAPES, OMP_ALLOWED, ("E005", "E006", "E007"))
    return OmpDirective(kind, clauses)
