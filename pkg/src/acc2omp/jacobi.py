"""Laplace mini-application: reference Jacobi solver, source variants, peak FLOPS.

The solver follows the two-sweep loop of the Fortran mini-application: an
update sweep writes ``f_k`` from the four neighbours of ``f``, then a
second sweep takes the max-norm update and copies ``f_k`` back into ``f``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import __version__


class Boundary(str, Enum):
    # top edge (j = ny) held at 1.0, other edges and the interior start at 0.0
    PAPER_DEFAULT = "paper-default"


@dataclass(frozen=True)
class JacobiParams:
    nx: int
    ny: int
    tolerance: float = 1e-3
    max_iter: int = 10000
    boundary: Boundary = Boundary.PAPER_DEFAULT

    def __post_init__(self) -> None:
        if self.nx < 3 or self.ny < 3:
            raise ValueError(f"grid must be at least 3x3, got {self.nx}x{self.ny}")
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")


@dataclass
class JacobiField:
    values: np.ndarray
    iter: int
    max_err: float


def initial_field(p: JacobiParams) -> np.ndarray:
    """Field indexed ``[i, j]`` with ``i`` along x, as ``f(i,j)`` in Fortran."""
    f = np.zeros((p.nx, p.ny))
    f[:, -1] = 1.0
    return f


def jacobi_solve(p: JacobiParams) -> JacobiField:
    f = initial_field(p)
    f_k = f.copy()
    max_err = math.inf
    it = 0
    while max_err > p.tolerance and it <= p.max_iter:
        f_k[1:-1, 1:-1] = 0.25 * ((f[2:, 1:-1] + f[:-2, 1:-1]) + (f[1:-1, 2:] + f[1:-1, :-2]))
        max_err = float(np.max(np.abs(f_k[1:-1, 1:-1] - f[1:-1, 1:-1])))
        f[1:-1, 1:-1] = f_k[1:-1, 1:-1]
        it += 1
    return JacobiField(f, it, max_err)


def residual(values: np.ndarray) -> float:
    """Max-norm of ``f - average of four neighbours`` over the interior."""
    avg = 0.25 * (values[2:, 1:-1] + values[:-2, 1:-1] + values[1:-1, 2:] + values[1:-1, :-2])
    return float(np.max(np.abs(values[1:-1, 1:-1] - avg)))


# -- source variants ----------------------------------------------------------

class Variant(str, Enum):
    SERIAL = "serial"
    ACC_NO_DATA = "acc-nodata"
    ACC_DATA = "acc-data"
    OMP_NO_DATA = "omp-nodata"
    OMP_DATA = "omp-data"


# Directive lines per variant, keyed by the slot they occupy in the loop.
_DIRECTIVES: dict[Variant, dict[str, str]] = {
    Variant.SERIAL: {},
    Variant.ACC_NO_DATA: {
        "loop1": "!$acc parallel loop gang worker vector",
        "end1": "!$acc end parallel",
        "loop2": "!$acc parallel loop",
        "end2": "!$acc end parallel",
    },
    Variant.ACC_DATA: {
        "data": "!$acc data copyin(f) copyout(f_k)",
        "loop1": "!$acc parallel loop gang worker vector collapse(2)",
        "end1": "!$acc end parallel",
        "loop2": "!$acc parallel loop collapse(2) reduction(max:max_err)",
        "end2": "!$acc end parallel",
        "enddata": "!$acc end data",
    },
    Variant.OMP_NO_DATA: {
        "loop1": "!$omp target teams distribute parallel do simd map(to:f) map(from:f_k)",
        "end1": "!$omp end target teams distribute parallel do simd",
        "loop2": "!$omp target teams distribute parallel do simd",
        "end2": "!$omp end target teams distribute parallel do simd",
    },
    Variant.OMP_DATA: {
        "data": "!$omp target data map(to:f) map(from:f_k)",
        "loop1": "!$omp target teams distribute parallel do simd collapse(2) schedule(static,1)",
        "end1": "!$omp end target teams distribute parallel do simd",
        "loop2": ("!$omp target teams distribute parallel do simd collapse(2) schedule(static,1) "
                  "reduction(max:max_err)"),
        "end2": "!$omp end target teams distribute parallel do simd",
        "enddata": "!$omp end target data",
    },
}

# The computational core; "@slot" lines are replaced by a directive or dropped.
_CORE = """\
@data
do while (max_err.gt.error.and.iter.le.max_iter)
@loop1
   do j=2,ny-1
      do i=2,nx-1
         df_x = f(i+1,j) + f(i-1,j)
         df_y = f(i,j+1) + f(i,j-1)
         f_k(i,j) = 0.25*(df_x + df_y)
      enddo
    enddo
@end1
    max_err=0.

@loop2
    do j=2,ny-1
       do i=2,nx-1
          max_err = max(dabs(f_k(i,j) - f(i,j)),max_err)
          f(i,j) = f_k(i,j)
       enddo
    enddo
@end2
    iter = iter +1
enddo
@enddata"""

_PROLOGUE = """\
program laplace
  implicit none
  integer, parameter :: nx = {nx}, ny = {ny}
  integer, parameter :: max_iter = {max_iter}
  double precision, parameter :: error = {tolerance}
  double precision :: f(nx,ny), f_k(nx,ny)
  double precision :: df_x, df_y, max_err
  integer :: i, j, iter

  f = 0.d0
  f(:,ny) = 1.d0
  f_k = f
  max_err = huge(1.d0)
  iter = 0
"""

_EPILOGUE = """
  print '(a,i0,a,es12.5)', 'iterations: ', iter, '  max_err: ', max_err
end program laplace
"""


def fortran_real(x: float) -> str:
    text = repr(float(x))
    return text.replace("e", "d") if "e" in text else text + "d0"


def header(v: Variant, p: JacobiParams) -> str:
    return (f"! laplace mini-application, variant {v.value}\n"
            f"! nx={p.nx} ny={p.ny} tolerance={p.tolerance!r} max_iter={p.max_iter}\n"
            f"! generated by acc2omp {__version__}\n")


def computational_core(v: Variant) -> str:
    slots = _DIRECTIVES[Variant(v)]
    lines = []
    for line in _CORE.splitlines():
        if line.startswith("@"):
            if line[1:] in slots:
                lines.append(slots[line[1:]])
        else:
            lines.append(line)
    return "\n".join(lines) + "\n"


def generate_variant(v: Variant | str, p: JacobiParams) -> str:
    """Complete free-form Fortran program for one variant of the mini-application."""
    v = Variant(v)
    prologue = _PROLOGUE.format(nx=p.nx, ny=p.ny, max_iter=p.max_iter,
                                tolerance=fortran_real(p.tolerance))
    return header(v, p) + prologue + "\n" + computational_core(v) + _EPILOGUE


# -- peak performance ---------------------------------------------------------

@dataclass(frozen=True)
class PeakSpec:
    clock_hz: float
    cores: int
    flop_per_cycle: float

    def __post_init__(self) -> None:
        for name in ("clock_hz", "cores", "flop_per_cycle"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be positive, got {value!r}")


def peak_flops(s: PeakSpec) -> float:
    """Theoretical peak: clock rate times cores times FLOP per core per cycle."""
    return s.clock_hz * s.cores * s.flop_per_cycle
