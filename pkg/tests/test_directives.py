import pytest
from hypothesis import given, settings, strategies as st

from acc2omp.diagnostics import DirectiveError
from acc2omp.directives import (
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
from acc2omp.rewriter import emit_acc, payload_of
from acc2omp.source import Dialect

from helpers import random_acc_directive

COLLAPSE2 = Clause("collapse", IntExpr("2"))


def test_parallel_loop_gang_worker_vector():
    d = parse_acc("parallel loop gang worker vector collapse(2)")
    assert d == AccDirective(AccKind.PARALLEL_LOOP, (
        Clause("gang"), Clause("worker"), Clause("vector"), COLLAPSE2))


def test_end_parallel():
    assert parse_acc("end parallel") == AccDirective(AccKind.END_PARALLEL, ())


def test_reduction_max():
    d = parse_acc("parallel loop collapse(2) reduction(max:max_err)")
    assert d.clauses == (COLLAPSE2, Clause("reduction", Reduction("max", ("max_err",))))


def test_data_clauses():
    d = parse_acc("data copyin(f) copyout(f_k)")
    assert d == AccDirective(AccKind.DATA, (
        Clause("copyin", VarList(("f",))), Clause("copyout", VarList(("f_k",)))))


@pytest.mark.parametrize("payload,kind", [
    ("parallel", AccKind.PARALLEL),
    ("kernels", AccKind.KERNELS),
    ("kernels loop", AccKind.KERNELS_LOOP),
    ("loop", AccKind.LOOP),
    ("end kernels", AccKind.END_KERNELS),
    ("end data", AccKind.END_DATA),
    ("end parallel loop", AccKind.END_PARALLEL),
])
def test_acc_construct_kinds(payload, kind):
    assert parse_acc(payload).kind is kind


def test_case_and_whitespace_normalization():
    assert parse_acc("PARALLEL  LOOP") == parse_acc("parallel loop")
    assert parse_acc("Parallel Loop Collapse( 2 ) Reduction( MAX : err )") == AccDirective(
        AccKind.PARALLEL_LOOP, (COLLAPSE2, Clause("reduction", Reduction("max", ("err",)))))


def test_identifiers_keep_their_case():
    assert parse_acc("data copy(Field)").clauses[0].args == VarList(("Field",))


def test_optional_commas_between_clauses():
    assert parse_acc("parallel loop gang, vector, collapse(2)") == parse_acc(
        "parallel loop gang vector collapse(2)")


def test_clause_order_preserved():
    d = parse_acc("parallel loop reduction(+:s) collapse(3) private(i, j)")
    assert [c.name for c in d.clauses] == ["reduction", "collapse", "private"]
    assert d.clauses[2].args == VarList(("i", "j"))


def test_array_sections_in_var_lists():
    d = parse_acc("parallel loop copyin(x[0:n]) copy(y[0:n], z)", Dialect.C)
    assert d.clauses[1].args == VarList(("y[0:n]", "z"))


def test_expressions_are_verbatim():
    assert parse_acc("parallel num_gangs( n*2 + 1 )").clauses[0].args == IntExpr("n*2 + 1")


@pytest.mark.parametrize("payload,code", [
    ("", "E002"),
    ("frobnicate", "E002"),
    ("parallel data", "E002"),
    ("update host(a)", "E002"),
    ("loop(2)", "E002"),
    ("parallel loop async(1)", "E003"),
    ("data gang", "E003"),
    ("end data copy(a)", "E003"),
    ("loop copyin(a)", "E003"),
    ("parallel loop reduction(max)", "E004"),
    ("parallel loop reduction(avg:x)", "E004"),
    ("parallel loop collapse()", "E004"),
    ("parallel loop collapse", "E004"),
    ("parallel loop gang(32)", "E004"),
    ("data copyin()", "E004"),
    ("data copyin(a,)", "E004"),
    ("data copyin(1abc)", "E004"),
    ("parallel loop collapse(2", "E004"),
    ("parallel loop @", "E004"),
])
def test_acc_errors(payload, code):
    with pytest.raises(DirectiveError) as info:
        parse_acc(payload)
    assert info.value.code == code


def test_end_directives_do_not_exist_in_c():
    with pytest.raises(DirectiveError) as info:
        parse_acc("end parallel", Dialect.C)
    assert info.value.code == "E002"


def test_c_reduction_operators_only_in_c():
    assert parse_acc("parallel loop reduction(&&:ok)", "c").clauses[0].args.operator == "&&"
    with pytest.raises(DirectiveError):
        parse_acc("parallel loop reduction(&&:ok)", "fortran")


def test_kernels_loop_accepts_parallel_loop_clauses():
    d = parse_acc("kernels loop gang worker vector collapse(2) num_gangs(4) vector_length(32)")
    assert len(d.clauses) == 6


def test_omp_target_data():
    d = parse_omp("target data map(to:f) map(from:f_k)")
    assert d == OmpDirective(OmpKind.TARGET_DATA, (
        Clause("map", MapList("to", ("f",))), Clause("map", MapList("from", ("f_k",)))))


def test_omp_end_target_data():
    assert parse_omp("end target data") == OmpDirective(OmpKind.END_TARGET_DATA, ())


def test_omp_combined_kind_is_dialect_neutral():
    f = parse_omp("target teams distribute parallel do simd collapse(2) schedule(static,1)",
                  Dialect.FORTRAN)
    c = parse_omp("target teams distribute parallel for simd collapse(2) schedule(static,1)",
                  Dialect.C)
    assert f == c
    assert f.kind is OmpKind.TARGET_TEAMS_DISTRIBUTE_PARALLEL_LOOP_SIMD
    assert f.clauses[1].args == SchedulePair("static", "1")


def test_omp_loop_keyword_must_match_dialect():
    with pytest.raises(DirectiveError) as info:
        parse_omp("target teams distribute parallel for simd", Dialect.FORTRAN)
    assert info.value.code == "E005"


def test_omp_map_without_type_is_tofrom():
    assert parse_omp("target data map(a)").clauses[0].args == MapList("tofrom", ("a",))


def test_omp_parallel_simd_spellings():
    assert parse_omp("parallel simd").kind is OmpKind.PARALLEL_SIMD
    assert parse_omp("parallel do simd").kind is OmpKind.PARALLEL_SIMD


@pytest.mark.parametrize("payload,code", [
    ("target", "E005"),
    ("target teams distribute", "E005"),
    ("target data map(to:a) nowait", "E006"),
    ("target data collapse(2)", "E006"),
    ("teams distribute map(to:a)", "E006"),
    ("target data map(sideways:a)", "E007"),
    ("target data map(to:)", "E007"),
    ("target teams distribute parallel do simd schedule(fast,1)", "E007"),
    ("target teams distribute parallel do simd schedule(static,1,2)", "E007"),
])
def test_omp_errors(payload, code):
    with pytest.raises(DirectiveError) as info:
        parse_omp(payload)
    assert info.value.code == code


@given(st.randoms(use_true_random=False), st.sampled_from(list(Dialect)),
       st.sampled_from([40, 80, 132]))
@settings(max_examples=300)
def test_acc_parse_emit_round_trip(rng, dialect, width):
    d = random_acc_directive(rng, dialect)
    lines = emit_acc(d, dialect, "", width)
    assert parse_acc(payload_of(lines, dialect), dialect) == d

