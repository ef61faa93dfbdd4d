import io
import json
import shutil
import subprocess
import sys

import pytest

from acc2omp.cli import run, sibling_path
from acc2omp.rewriter import plan_unit
from acc2omp.source import SourceUnit

from helpers import FIXTURES

JSON_KEYS = {"file", "line", "severity", "code", "message", "excerpt"}

# fixture -> (exit code, [(code, line), ...]) under default options
MATRIX = {
    "bad_continuation.f90": (1, [("E001", 2)]),
    "continuation.f90": (0, []),
    "empty.f90": (0, []),
    "kernels_demo.f90": (1, [("E101", 4), ("E101", 8)]),
    "laplace_acc_data.f90": (0, []),
    "laplace_acc_nodata.f90": (0, []),
    "laplace_omp_data.f90": (0, []),
    "laplace_serial.f90": (0, []),
    "mid_error.f90": (1, [("E003", 5), ("E103", 9)]),
    "omp_only.f90": (0, []),
    "orphan_loops.f90": (0, [("W103", 5)]),
    "listing_table_acc.f90": (0, []),
    "saxpy.c": (0, []),
    "unbalanced.f90": (1, [("E103", 9)]),
    "vector_length.f90": (0, [("W102", 4)]),
}


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def work(tmp_path):
    for name in MATRIX:
        shutil.copy(FIXTURES / name, tmp_path / name)
    return tmp_path


@pytest.mark.parametrize("name", sorted(MATRIX))
def test_fixture_matrix(work, name):
    expected_code, expected_diags = MATRIX[name]
    code, _, err = cli("translate", "--diag", "json", work / name)
    assert code == expected_code
    records = json.loads(err)
    assert all(set(r) == JSON_KEYS for r in records)
    assert [(r["code"], r["line"]) for r in records] == expected_diags
    assert all(r["file"] == str(work / name) for r in records)
    assert all(r["severity"] == {"E": "error", "W": "warning", "I": "info"}[r["code"][0]]
               for r in records)
    # the CLI reports exactly what the library reports
    library = plan_unit(SourceUnit.read(work / name)).diagnostics
    assert records == [d.to_json() for d in library]
    # all or nothing: a failed file never produces output
    assert sibling_path(work / name).exists() is (expected_code == 0)


def test_no_partial_output_in_place(work):
    before = (work / "mid_error.f90").read_bytes()
    code, out, _ = cli("translate", "--output", "in-place", work / "mid_error.f90")
    assert code == 1 and out == ""
    assert (work / "mid_error.f90").read_bytes() == before
    assert not (work / "mid_error.f90.bak").exists()


def test_no_partial_output_stdout(work):
    code, out, _ = cli("translate", "--output", "stdout", work / "mid_error.f90")
    assert code == 1 and out == ""


def test_batch_translates_good_files_and_fails(work):
    code, _, _ = cli("translate", "--jobs", "4", work / "saxpy.c",
                     work / "mid_error.f90", work / "laplace_acc_data.f90")
    assert code == 1
    assert sibling_path(work / "saxpy.c").exists()
    assert sibling_path(work / "laplace_acc_data.f90").exists()
    assert not sibling_path(work / "mid_error.f90").exists()


def test_sibling_name(work):
    cli("translate", work / "saxpy.c")
    assert (work / "saxpy.omp.c").read_text().count("#pragma omp target teams") == 2


def test_in_place_keeps_backup(work):
    original = (work / "laplace_acc_data.f90").read_bytes()
    code, _, _ = cli("translate", "--output", "in-place", work / "laplace_acc_data.f90")
    assert code == 0
    assert (work / "laplace_acc_data.f90.bak").read_bytes() == original
    assert b"!$omp target data" in (work / "laplace_acc_data.f90").read_bytes()


def test_stdout_preserves_input_order(work):
    code, out, _ = cli("translate", "--output", "stdout", "--jobs", "3",
                       work / "empty.f90", work / "laplace_serial.f90", work / "saxpy.c")
    expected = "".join(SourceUnit.read(work / n).text
                       for n in ("empty.f90", "laplace_serial.f90"))
    assert code == 0 and out.startswith(expected) and "#pragma omp" in out


def test_kernels_message_and_fallback(work):
    code, _, err = cli("translate", work / "kernels_demo.f90")
    assert code == 1 and "kernels_demo.f90:4: error E101" in err
    code, _, err = cli("translate", "--kernels", "target-teams", work / "kernels_demo.f90")
    assert code == 0 and "W101" in err


def test_fail_on_warning(work):
    code, _, _ = cli("translate", "--fail-on-warning", work / "vector_length.f90")
    assert code == 1 and not sibling_path(work / "vector_length.f90").exists()


def test_keep_vector_length_error(work):
    code, _, err = cli("translate", "--keep-vector-length-error", work / "vector_length.f90")
    assert code == 1 and "E102" in err


def test_wrap_width(work):
    code, out, _ = cli("translate", "--output", "stdout", "--wrap-width", "40",
                       "--inject-schedule", "static,1", work / "laplace_acc_data.f90")
    directives = [ln for ln in out.splitlines() if ln.startswith("!$omp")]
    assert code == 0 and all(len(ln) <= 40 for ln in directives)


@pytest.mark.parametrize("argv", [
    ["translate", "missing.f90"],
    ["translate", "--inject-schedule", "static", "{f}"],
    ["translate", "--inject-schedule", "auto,1", "{f}"],
    ["translate", "--wrap-width", "20", "{f}"],
    ["translate", "{txt}"],
    ["verify", "{f}"],
    ["bogus"],
    [],
    ["flops", "--clock-ghz", "0", "--cores", "4"],
    ["corpus", "--nx", "2"],
])
def test_usage_errors_exit_2(work, argv):
    (work / "notes.txt").write_text("!$acc parallel\n")
    f = work / "saxpy.c"
    argv = [a.format(f=f, txt=work / "notes.txt") for a in argv]
    code, out, err = cli(*argv)
    assert code == 2 and out == "" and err


def test_explicit_dialect_for_unknown_extension(work):
    (work / "kernel.inc").write_text("!$acc data copy(a)\n!$acc end data\n")
    code, _, _ = cli("translate", "--dialect", "fortran", work / "kernel.inc")
    assert code == 0 and (work / "kernel.omp.inc").exists()


def test_verify_command(work):
    acc, omp = work / "laplace_acc_data.f90", work / "laplace_omp_data.f90"
    code, out, _ = cli("verify", "--inject-schedule", "static,1", acc, omp)
    assert code == 0 and out.strip().endswith("MATCH: 6 directive positions, 0 mismatches")
    code, out, _ = cli("verify", acc, omp)
    assert code == 1 and "only in OpenMP file: schedule(static,1)" in out
    code, _, err = cli("verify", "--diag", "json", work / "mid_error.f90", omp)
    assert code == 1 and json.loads(err)[0]["code"] == "E003"


def test_corpus_command(tmp_path):
    code, out, _ = cli("corpus", "--nx", "32", "--ny", "32", "--out-dir", tmp_path)
    assert code == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["laplace_acc_data.f90", "laplace_acc_nodata.f90", "laplace_omp_data.f90",
                     "laplace_omp_nodata.f90", "laplace_serial.f90"]
    code, out, _ = cli("corpus", "--variant", "acc-data")
    assert code == 0 and "!$acc data copyin(f) copyout(f_k)" in out


def test_flops_command():
    code, out, _ = cli("flops", "--clock-ghz", "1.38", "--cores", "5120")
    assert code == 0 and "FLOPS: 7.065600e+12" in out and "TFLOPS: 7.0656" in out


def test_help_and_version():
    assert cli("--help")[0] == 0
    code, out, _ = cli("--version")
    assert code == 0 and "acc2omp" in out


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "acc2omp", "translate", "--output", "stdout",
                           str(FIXTURES / "unbalanced.f90")], capture_output=True, text=True)
    assert proc.returncode == 1 and proc.stdout == "" and "E103" in proc.stderr
