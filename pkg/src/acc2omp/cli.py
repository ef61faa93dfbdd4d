"""Command-line front end.

Exit codes: 0 success, 1 translation errors (or warnings under
``--fail-on-warning``) or a verification mismatch, 2 usage or I/O errors.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import shutil
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, TextIO

from . import __version__
from .diagnostics import Diagnostic, DiagnosticError, Severity
from .jacobi import JacobiParams, PeakSpec, Variant, generate_variant, peak_flops
from .mapping import KernelsPolicy, MappingConfig
from .rewriter import translate_unit, verify_pair
from .source import Dialect, SourceUnit

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would sys.exit(2) here
        raise UsageError(message)


def _schedule(text: str) -> tuple[str, str]:
    kind, sep, chunk = text.partition(",")
    if not sep or not chunk.strip():
        raise argparse.ArgumentTypeError(f"expected KIND,CHUNK, got {text!r}")
    return kind.strip(), chunk.strip()


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="acc2omp",
                     description="Translate OpenACC directives to OpenMP target offloading.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    mapping = _Parser(add_help=False)
    mapping.add_argument("--dialect", choices=[d.value for d in Dialect],
                         help="source dialect (default: from the file extension)")
    mapping.add_argument("--kernels", choices=[k.value for k in KernelsPolicy],
                         default=KernelsPolicy.STRICT.value,
                         help="'strict' rejects kernels (E101); 'target-teams' translates "
                              "them like parallel with W101")
    mapping.add_argument("--inject-schedule", type=_schedule, metavar="KIND,CHUNK",
                         help="append schedule(KIND,CHUNK) to combined loop constructs")
    mapping.add_argument("--keep-vector-length-error", action="store_true",
                         help="treat vector_length as an error (E102) instead of dropping it")
    mapping.add_argument("--fail-on-warning", action="store_true")
    mapping.add_argument("--diag", choices=["human", "json"], default="human",
                         help="diagnostic format on stderr")

    tr = sub.add_parser("translate", parents=[mapping], help="translate source files")
    tr.add_argument("inputs", nargs="+", type=Path)
    tr.add_argument("--output", choices=["stdout", "sibling", "in-place"], default="sibling",
                    help="write to stdout, to NAME.omp.EXT next to the input (default), "
                         "or over the input keeping NAME.EXT.bak")
    tr.add_argument("--wrap-width", type=int, default=None,
                    help="maximum directive line length (default 132 Fortran, 120 C)")
    tr.add_argument("--jobs", type=int, default=1, help="files translated concurrently")

    ve = sub.add_parser("verify", parents=[mapping],
                        help="check that an OpenACC file translates to an OpenMP file")
    ve.add_argument("inputs", nargs=2, type=Path, metavar="FILE",
                    help="the OpenACC file, then the OpenMP file")

    co = sub.add_parser("corpus", help="generate the Laplace mini-application variants")
    co.add_argument("--variant", choices=[v.value for v in Variant] + ["all"], default="all")
    co.add_argument("--nx", type=int, default=8192)
    co.add_argument("--ny", type=int, default=8192)
    co.add_argument("--tolerance", type=float, default=1e-3)
    co.add_argument("--max-iter", type=int, default=1000)
    co.add_argument("--out-dir", type=Path, default=None,
                    help="write laplace_<variant>.f90 files here instead of stdout")

    fl = sub.add_parser("flops", help="theoretical peak FLOPS")
    fl.add_argument("--clock-ghz", type=float, required=True)
    fl.add_argument("--cores", type=int, required=True)
    fl.add_argument("--flop-per-cycle", type=float, default=1.0)
    return parser


def config_from_args(args: argparse.Namespace) -> MappingConfig:
    try:
        return MappingConfig(
            kernels_policy=KernelsPolicy(args.kernels),
            inject_schedule=args.inject_schedule,
            drop_vector_length=not args.keep_vector_length_error,
            fail_on_warning=args.fail_on_warning,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


@dataclass
class FileResult:
    path: Path
    text: str | None = None
    diagnostics: list[Diagnostic] = field(default_factory=list)
    io_error: str | None = None


def sibling_path(path: Path) -> Path:
    return path.with_name(f"{path.stem}.omp{path.suffix}")


def _load(path: Path, dialect: str | None) -> SourceUnit:
    try:
        return SourceUnit.read(path, dialect)
    except (OSError, UnicodeDecodeError) as exc:
        raise UsageError(f"{path}: {exc}") from exc
    except ValueError as exc:
        raise UsageError(f"{path}: {exc} (use --dialect)") from exc


def _translate_one(path: Path, args, config: MappingConfig) -> FileResult:
    try:
        unit = _load(path, args.dialect)
    except UsageError as exc:
        return FileResult(path, io_error=str(exc))
    text, diags = translate_unit(unit, config, args.wrap_width)
    return FileResult(path, text, diags)


def _emit_diagnostics(diags: list[Diagnostic], fmt: str, err: TextIO) -> None:
    if fmt == "json":
        json.dump([d.to_json() for d in diags], err, indent=2)
        err.write("\n")
    else:
        for d in diags:
            err.write(f"{d}\n")


def _failed(diags: list[Diagnostic], config: MappingConfig) -> bool:
    bad = {Severity.ERROR, Severity.WARNING} if config.fail_on_warning else {Severity.ERROR}
    return any(d.severity in bad for d in diags)


def _cmd_translate(args, out: TextIO, err: TextIO) -> int:
    config = config_from_args(args)
    if args.wrap_width is not None and args.wrap_width < 40:
        raise UsageError("--wrap-width must be at least 40")
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        # map() keeps input order, so output does not depend on scheduling
        results = list(pool.map(lambda p: _translate_one(p, args, config), args.inputs))

    status = EXIT_OK
    all_diags: list[Diagnostic] = []
    for r in results:
        if r.io_error:
            err.write(f"acc2omp: {r.io_error}\n")
            status = EXIT_USAGE
            continue
        all_diags += r.diagnostics
        if r.text is None:
            status = max(status, EXIT_FAILED)
            continue
        try:
            _write_output(r, args.output, out)
        except OSError as exc:
            err.write(f"acc2omp: {r.path}: {exc}\n")
            status = EXIT_USAGE
    _emit_diagnostics(all_diags, args.diag, err)
    if status == EXIT_OK and _failed(all_diags, config):
        status = EXIT_FAILED
    return status


def _write_output(r: FileResult, mode: str, out: TextIO) -> None:
    data = r.text.encode("utf-8")
    if mode == "stdout":
        out.write(r.text)
        out.flush()
    elif mode == "sibling":
        sibling_path(r.path).write_bytes(data)
    else:
        shutil.copy2(r.path, r.path.with_name(r.path.name + ".bak"))
        r.path.write_bytes(data)


def _cmd_verify(args, out: TextIO, err: TextIO) -> int:
    config = config_from_args(args)
    acc_path, omp_path = args.inputs
    acc_unit, omp_unit = _load(acc_path, args.dialect), _load(omp_path, args.dialect)
    try:
        report = verify_pair(acc_unit, omp_unit, config)
    except DiagnosticError as exc:
        _emit_diagnostics(exc.diagnostics, args.diag, err)
        return EXIT_FAILED
    out.write(report.render(acc_unit.dialect) + "\n")
    if args.diag == "json":
        _emit_diagnostics([], "json", err)
    return EXIT_OK if report.match else EXIT_FAILED


def _cmd_corpus(args, out: TextIO, err: TextIO) -> int:
    try:
        params = JacobiParams(args.nx, args.ny, args.tolerance, args.max_iter)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    variants = list(Variant) if args.variant == "all" else [Variant(args.variant)]
    for v in variants:
        text = generate_variant(v, params)
        if args.out_dir is None:
            out.write(text)
            continue
        args.out_dir.mkdir(parents=True, exist_ok=True)
        target = args.out_dir / f"laplace_{v.value.replace('-', '_')}.f90"
        target.write_text(text, encoding="utf-8")
        out.write(f"{target}\n")
    return EXIT_OK


def _cmd_flops(args, out: TextIO, err: TextIO) -> int:
    try:
        spec = PeakSpec(args.clock_ghz * 1e9, args.cores, args.flop_per_cycle)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    value = peak_flops(spec)
    out.write(f"FLOPS: {value:.6e}\nTFLOPS: {value / 1e12:.4f}\n")
    return EXIT_OK


_COMMANDS = {
    "translate": _cmd_translate,
    "verify": _cmd_verify,
    "corpus": _cmd_corpus,
    "flops": _cmd_flops,
}


def run(argv: Sequence[str] | None = None, out: TextIO | None = None,
        err: TextIO | None = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        # argparse prints --help and --version to sys.stdout itself
        with contextlib.redirect_stdout(out):
            args = parser.parse_args(argv)
        return _COMMANDS[args.command](args, out, err)
    except UsageError as exc:
        err.write(f"acc2omp: error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help, --version
        return exc.code if isinstance(exc.code, int) else EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
