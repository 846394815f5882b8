"""Command line: ``gausselim {solve,trace,lsq,corpus,verify}``.

Exit status: 0 success, 1 failed solve or verification, 2 usage error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..eliminate import LinearSystem
from ..leastsq import CASE1, CASE2, LsqProblem
from ..matrixcore import SingularMatrixError
from ..compact import NotPositiveDefiniteError, RefinementDivergedError
from ..scalar import PrecisionSpec
from .corpus import run_corpus
from .fileformat import FormatError, parse_problem_file
from .methods import LSQ_METHODS, SOLVE_METHODS, UsageError, coerce, lsq_with, solve_with
from .render import STYLES, render_tableau
from .verify import verify_all

__all__ = ["main", "build_parser"]


class _Usage(Exception):
    pass


_FROM_FILE = object()     # --precision not given: keep the file's declared precision


def _precision(text):
    if text == "exact":
        return None
    try:
        return PrecisionSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gausselim", description="Historical Gaussian elimination workbench.")
    sub = p.add_subparsers(dest="command", required=True)

    def solve_opts(sp):
        sp.add_argument("--method", choices=SOLVE_METHODS, default="schoolbook")
        sp.add_argument("--pivot", action="store_true", help="partial pivoting (schoolbook, ldu)")
        sp.add_argument("--precision", type=_precision, default=_FROM_FILE,
                        help="exact, frac=K or sig=K (default: as declared in FILE)")
        sp.add_argument("--refine", type=int, default=0, metavar="N", help="Doolittle refinement passes")
        sp.add_argument("--order", help="elimination order for rolle, e.g. 'x v z y'")
        sp.add_argument("file", type=Path, metavar="FILE")

    solve_opts(sub.add_parser("solve", help="solve a square system"))
    tr = sub.add_parser("trace", help="solve and print the trace or tables")
    solve_opts(tr)
    tr.add_argument("--style", choices=STYLES, default="text")

    lq = sub.add_parser("lsq", help="least squares (case 1) or minimum norm (case 2)")
    lq.add_argument("--case", choices=("1", "2"), required=True)
    lq.add_argument("--method", choices=LSQ_METHODS, default="bracket")
    lq.add_argument("--precision", type=_precision, default=_FROM_FILE)
    lq.add_argument("file", type=Path, metavar="FILE")

    co = sub.add_parser("corpus", help="run the corpus against its expected values")
    co.add_argument("--id", help="run one problem")
    co.add_argument("--dir", type=Path, help="corpus directory (default: bundled)")

    ve = sub.add_parser("verify", help="cross-verify every applicable method")
    ve.add_argument("file", type=Path, metavar="FILE")
    return p


def _fmt(v) -> str:
    return v.plain() if hasattr(v, "plain") else str(v)


def _load(path: Path, precision):
    try:
        pf = parse_problem_file(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from None
    except (FormatError, ValueError) as exc:
        raise _Usage(f"{path}: {exc}") from None
    prob = pf.problem
    if precision is not _FROM_FILE:
        A, b = coerce(prob.A, precision), coerce(prob.b, precision)
        prob = LinearSystem(A, b, prob.names) if isinstance(prob, LinearSystem) else LsqProblem(prob.kind, A, b)
    return prob


def _print_solution(names, x, out):
    for name, v in zip(names, x):
        print(f"{name} = {_fmt(v)}", file=out)


def _matrix_text(m) -> str:
    cells = [[_fmt(v) for v in row] for row in m]
    widths = [max(len(r[j]) for r in cells) for j in range(len(cells[0]))] if cells else []
    return "\n".join("  " + " ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells)


def _solve(args, out, trace: bool) -> int:
    prob = _load(args.file, args.precision)
    if not isinstance(prob, LinearSystem):
        raise _Usage("FILE holds a least-squares problem; use 'lsq'")
    try:
        res = solve_with(args.method, prob, pivot=args.pivot, order=args.order.split() if args.order else None,
                         refine=args.refine)
    except UsageError as exc:
        raise _Usage(str(exc)) from None
    if trace:
        if res.trace is not None and not res.text:
            for label, m in getattr(res.trace, "snapshots", []):
                print(label, file=out)
                print(_matrix_text(m), file=out)
            for step in getattr(res.trace, "steps", []):
                print(f"  {step}", file=out)
        if res.text:
            print(res.text, file=out, end="")
        for t in res.tableaux:
            print(render_tableau(t, args.style), file=out)
    for note in res.notes:
        print(f"# {note}", file=out)
    _print_solution(prob.names, res.x, out)
    return 0


def _lsq(args, out) -> int:
    prob = _load(args.file, args.precision)
    kind = CASE1 if args.case == "1" else CASE2
    try:
        prob = LsqProblem(kind, prob.A, prob.b)
    except ValueError as exc:
        raise _Usage(str(exc)) from None
    res = lsq_with(args.method, prob)
    for note in res.notes:
        print(f"# {note}", file=out)
    _print_solution([f"x{i + 1}" for i in range(len(res.x))], res.x, out)
    return 0


def _corpus(args, out) -> int:
    if args.dir is not None and not args.dir.is_dir():
        raise _Usage(f"{args.dir} is not a directory")
    results = run_corpus(args.dir, args.id)
    if args.id and not results:
        raise _Usage(f"no corpus problem with id {args.id!r}")
    for r in results:
        if r.ok:
            print(f"ok   {r.id} ({len(r.checked)} checks)", file=out)
        else:
            for f in r.failures:
                print(f"FAIL {r.id}: {f}", file=out)
    bad = sum(not r.ok for r in results)
    print(f"{len(results) - bad} passed, {bad} failed", file=out)
    return 1 if bad else 0


def _verify(args, out) -> int:
    report = verify_all(_load(args.file, _FROM_FILE))
    print(report.summary(), file=out, end="")
    return 0 if report.ok else 1


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:            # argparse: 2 for usage errors, 0 for --help
        return int(exc.code or 0)
    out = sys.stdout
    try:
        if args.command in ("solve", "trace"):
            return _solve(args, out, args.command == "trace")
        if args.command == "lsq":
            return _lsq(args, out)
        if args.command == "corpus":
            return _corpus(args, out)
        return _verify(args, out)
    except _Usage as exc:
        print(f"gausselim: error: {exc}", file=sys.stderr)
        return 2
    except (SingularMatrixError, NotPositiveDefiniteError, RefinementDivergedError, ArithmeticError) as exc:
        print(f"gausselim: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"gausselim: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
