"""Translate OpenACC directives in Fortran and C sources to OpenMP target offloading."""

__version__ = "0.1.0"

from .diagnostics import CATALOG, Diagnostic, DiagnosticError, DirectiveError, Severity
from .directives import (
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
    parse_acc,
    parse_omp,
)
from .jacobi import (
    JacobiField,
    JacobiParams,
    PeakSpec,
    Variant,
    generate_variant,
    jacobi_solve,
    peak_flops,
)
from .mapping import ConstructStack, KernelsPolicy, MappingConfig, map_clause, map_directive
from .rewriter import (
    EquivalenceReport,
    RewritePlan,
    emit_acc,
    emit_omp,
    plan_unit,
    translate_unit,
    verify_pair,
)
from .source import Dialect, DirectiveLine, Sentinel, SourceUnit, scan_directives

__all__ = [
    "AccDirective", "AccKind", "CATALOG", "Clause", "ConstructStack", "Diagnostic",
    "DiagnosticError", "Dialect", "DirectiveError", "DirectiveLine", "EquivalenceReport",
    "IntExpr", "JacobiField", "JacobiParams", "KernelsPolicy", "MapList", "MappingConfig",
    "OmpDirective", "OmpKind", "PeakSpec", "Reduction", "RewritePlan", "SchedulePair",
    "Sentinel", "Severity", "SourceUnit", "VarList", "Variant", "emit_acc", "emit_omp",
    "generate_variant", "jacobi_solve", "map_clause", "map_directive", "parse_acc",
    "parse_omp", "peak_flops", "plan_unit", "scan_directives", "translate_unit", "verify_pair",
]
