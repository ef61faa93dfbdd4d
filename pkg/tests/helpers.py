"""Shared generators and independent oracles for the test suite."""

from __future__ import annotations

import random
from pathlib import Path

import numpy as np

from acc2omp.directives import (  # noqa: F401  shape tags are private
    _BARE,
    _EXPR,
    _MAP,
    _REDUCTION,
    _SCHEDULE,
    _VARLIST,
    ACC_ALLOWED,
    ACC_CLAUSE_SHAPES,
    OMP_ALLOWED,
    OMP_CLAUSE_SHAPES,
    AccDirective,
    AccKind,
    Clause,
    IntExpr,
    MapList,
    OmpDirective,
    OmpKind,
    Reduction,
    SchedulePair,
    VarList,
)
from acc2omp.source import Dialect

FIXTURES = Path(__file__).parent / "fixtures"

# short enough that any single clause fits a 40-column line with indent <= 2
NAMES = ["f", "f_k", "a", "max_err", "x1", "b(n)"]
EXPRS = ["2", "n", "n+1", "4*m"]
F_OPS = ["+", "*", "max", "min", "iand", "ior", "ieor", ".and.", ".or."]
C_OPS = ["+", "*", "max", "min", "&", "|", "^", "&&", "||"]


def _names(rng: random.Random) -> tuple[str, ...]:
    return tuple(rng.sample(NAMES, rng.randint(1, 2)))


def random_args(rng: random.Random, name: str, dialect: Dialect):
    shape = {**ACC_CLAUSE_SHAPES, **OMP_CLAUSE_SHAPES}[name]
    if shape == _BARE:
        return None
    if shape == _VARLIST:
        return VarList(_names(rng))
    if shape == _EXPR:
        return IntExpr(rng.choice(EXPRS))
    if shape == _REDUCTION:
        ops = F_OPS if dialect is Dialect.FORTRAN else C_OPS
        return Reduction(rng.choice(ops), _names(rng))
    if shape == _MAP:
        return MapList(rng.choice(["to", "from", "tofrom", "alloc"]), _names(rng))
    assert shape == _SCHEDULE
    kind = rng.choice(["static", "dynamic", "guided", "auto", "runtime"])
    return SchedulePair(kind, rng.choice([None, "1", "n", "chunk"]))


def _clauses(rng, allowed, dialect, max_clauses=4):
    pool = sorted(allowed)
    if not pool:
        return ()
    picks = [rng.choice(pool) for _ in range(rng.randint(0, max_clauses))]
    return tuple(Clause(n, random_args(rng, n, dialect)) for n in picks)


def random_omp_directive(rng: random.Random, dialect: Dialect) -> OmpDirective:
    kinds = [k for k in OmpKind if dialect is Dialect.FORTRAN or not k.is_end]
    kind = rng.choice(kinds)
    return OmpDirective(kind, _clauses(rng, OMP_ALLOWED[kind], dialect))


def random_acc_directive(rng: random.Random, dialect: Dialect) -> AccDirective:
    kinds = [k for k in AccKind if dialect is Dialect.FORTRAN or not k.is_end]
    kind = rng.choice(kinds)
    return AccDirective(kind, _clauses(rng, ACC_ALLOWED[kind], dialect))


def direct_solve(nx: int, ny: int) -> np.ndarray:
    """Dense solve of the 5-point Laplace system, top edge 1, other edges 0.

    Assembles one equation ``4 u(i,j) - sum of neighbours = 0`` per interior
    point, with known boundary values moved to the right-hand side.
    """
    boundary = np.zeros((nx, ny))
    boundary[:, -1] = 1.0
    interior = [(i, j) for i in range(1, nx - 1) for j in range(1, ny - 1)]
    index = {p: k for k, p in enumerate(interior)}
    n = len(interior)
    A = np.zeros((n, n))
    b = np.zeros(n)
    for (i, j), k in index.items():
        A[k, k] = 4.0
        for q in ((i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)):
            if q in index:
                A[k, index[q]] = -1.0
            else:
                b[k] += boundary[q]
    u = np.linalg.solve(A, b)
    out = boundary.copy()
    for (i, j), k in index.items():
        out[i, j] = u[k]
    return out
