"""The corpus of historical problems and its runner.

Each problem is a data file (see :mod:`.fileformat`) whose directives give
an id, a source tag, the expected solution and named landmarks to check in
the method's trace.  Exact problems are validated at load time by checking
that the expected solution has zero residual.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from ..arithmetic import lift
from ..eliminate import LinearSystem, closed_form_aryabhata, closed_form_diophantus, combine_rows
from ..leastsq import CASE1, bracket_from_normal, bracket_init, bracket_reduce_all, build_normal
from ..matrixcore import ldu_decompose, residual
from ..scalar import parse_scalar
from ..tableau import render_text
from .fileformat import FormatError, parse_problem_file, parse_recipe
from .methods import lsq_with, solve_with

__all__ = ["CorpusError", "CorpusProblem", "CorpusResult", "load_problem", "load_corpus", "run_problem",
           "run_corpus", "default_dir"]


class CorpusError(ValueError):
    def __init__(self, message, problem_id=None):
        super().__init__(message)
        self.problem_id = problem_id


@dataclass
class CorpusProblem:
    id: str
    source: str
    problem: object
    spec: object
    expected: tuple
    method: str
    landmarks: list = field(default_factory=list)    # (key, argument, value text)
    directives: dict = field(default_factory=dict)
    path: Path | None = None


@dataclass
class CorpusResult:
    id: str
    failures: list = field(default_factory=list)
    checked: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def default_dir() -> Path:
    return Path(str(resources.files("gausselim.workbench") / "data"))


def _values(text: str) -> tuple:
    return tuple(parse_scalar(t) for t in text.split())


def load_problem(path) -> CorpusProblem:
    path = Path(path)
    pf = parse_problem_file(path.read_text(encoding="utf-8"))
    d = pf.directives
    pid = pf.get("id", path.stem)
    if "expect" not in d:
        raise CorpusError(f"{pid}: no expected solution")
    expected = _values(pf.get("expect"))
    prob = pf.problem
    if len(expected) != prob.A.shape[1]:
        raise CorpusError(f"{pid}: {len(expected)} expected values for {prob.A.shape[1]} unknowns")
    if pf.spec is None and isinstance(prob, LinearSystem):
        r = residual(prob.A, np.array(expected, dtype=object), prob.b)
        if any(v != 0 for v in r):
            raise CorpusError(f"{pid}: expected solution has nonzero residual {list(map(str, r))}")
    landmarks = []
    for text in d.get("landmark", []):
        key_part, sep, value = text.partition("=")
        if not sep:
            raise CorpusError(f"{pid}: landmark {text!r} lacks '='")
        key, _, arg = key_part.strip().partition(" ")
        landmarks.append((key, arg.strip(), value.strip()))
    default_method = "schoolbook" if isinstance(prob, LinearSystem) else "bracket"
    return CorpusProblem(pid, pf.get("source", ""), prob, pf.spec, expected, pf.get("method", default_method),
                         landmarks, d, path)


def load_corpus(directory=None) -> list:
    """All problems in ``directory`` (default: the bundled corpus), sorted by file name.

    A file that fails to load becomes a :class:`CorpusError` entry in the list.
    """
    directory = Path(directory) if directory else default_dir()
    out = []
    for path in sorted(directory.glob("*.txt")):
        try:
            out.append(load_problem(path))
        except (CorpusError, FormatError, ValueError) as exc:
            out.append(CorpusError(f"{path.name}: {exc}", _declared_id(path)))
    return out


def _declared_id(path: Path) -> str:
    for line in path.read_text(encoding="utf-8", errors="replace").splitlines():
        if line.startswith("#!"):
            key, _, value = line[2:].strip().partition(" ")
            if key == "id" and value.strip():
                return value.strip()
    return path.stem


def _matrix(text: str) -> np.ndarray:
    rows = [_values(r) for r in text.split("/")]
    return lift(rows)


def _eq(a, b) -> bool:
    a, b = lift(a), lift(b)
    return a.shape == b.shape and bool(np.all(a == b))


def run_problem(cp: CorpusProblem) -> CorpusResult:
    res = CorpusResult(cp.id)

    def check(label, ok, detail=""):
        res.checked.append(label)
        if not ok:
            res.failures.append(f"{label}: {detail}" if detail else label)

    prob = cp.problem
    order = cp.directives.get("order", [None])[-1]
    try:
        if isinstance(prob, LinearSystem):
            outcome = solve_with(cp.method, prob, pivot="pivot" in cp.directives,
                                 order=order.split() if order else None)
        else:
            outcome = lsq_with(cp.method, prob)
    except Exception as exc:          # a failing solve is a corpus failure, not a crash
        res.failures.append(f"{cp.method}: {type(exc).__name__}: {exc}")
        return res
    got = tuple(lift(outcome.x))
    check("solution", got == cp.expected, f"got {[str(v) for v in got]}, expected {[str(v) for v in cp.expected]}")

    for key, arg, value in cp.landmarks:
        label = f"{key} {arg}".strip()
        try:
            _landmark(cp, outcome, key, arg, value, check, label)
        except Exception as exc:
            res.failures.append(f"{label}: {type(exc).__name__}: {exc}")
    return res


def _landmark(cp, outcome, key, arg, value, check, label):
    prob = cp.problem
    if key == "schoolbook.snapshots":
        from ..eliminate import schoolbook_solve
        _, trace = schoolbook_solve(prob)
        check(label, len(trace.snapshots) == int(value), f"{len(trace.snapshots)} systems")
    elif key == "fraction-free.row":
        from ..eliminate import fraction_free_solve
        _, trace = fraction_free_solve(prob)
        row = tuple(lift(trace.snapshots[-1][1])[int(arg) - 1])
        check(label, row == _values(value), f"got {[str(v) for v in row]}")
    elif key == "combine.row":
        rows = combine_rows(prob, parse_recipe(cp.directives["recipe"][-1]))
        row = rows[int(arg) - 1][1]
        check(label, row == _values(value), f"got {[str(v) for v in row]}")
    elif key == "rolle.direction":
        from ..eliminate import format_equation, rolle_solve
        order = cp.directives.get("order", [None])[-1]
        _, trace = rolle_solve(prob, order=order.split() if order else None)
        eq = trace.last_direction
        text = format_equation(eq.coeffs, eq.rhs, trace.names, trace.order)
        check(label, text == value.replace("-", "−"), f"got {text!r}")
    elif key in ("ldu.L", "ldu.DU"):
        fact, _ = ldu_decompose(prob.A)
        got = fact.L if key == "ldu.L" else fact.DU
        check(label, _eq(got, _matrix(value)), f"got {lift(got).tolist()}")
    elif key == "closed-form.diophantus":
        got = closed_form_diophantus(_diophantus_excess(prob))
        check(label, tuple(got) == _values(value), f"got {[str(v) for v in got]}")
    elif key == "closed-form.aryabhata":
        got = closed_form_aryabhata(prob.b)
        check(label, tuple(got) == _values(value), f"got {[str(v) for v in got]}")
    elif key == "tableau.golden":
        golden = (cp.path.parent / value).read_text(encoding="utf-8")
        text = render_text(outcome.tableaux[0])
        check(label, text == golden, "rendered tableau differs from golden file")
    elif key == "bracket.nn":
        if prob.kind == CASE1:
            t = bracket_init(prob.A, prob.b)
        else:
            t = bracket_from_normal(*build_normal(prob))
        t = bracket_reduce_all(t)
        got = t.get(t.mu, t.mu, t.mu)
        check(label, got == parse_scalar(value), f"got {got}")
    else:
        raise CorpusError(f"unknown landmark {key!r}")


def _diophantus_excess(prob) -> np.ndarray:
    return lift(prob.b)


def run_corpus(directory=None, only=None) -> list:
    """Results for every problem (or the one with id ``only``)."""
    results = []
    for cp in load_corpus(directory):
        if isinstance(cp, CorpusError):
            if only is None or only == cp.problem_id:
                results.append(CorpusResult(cp.problem_id, [str(cp)]))
            continue
        if only is not None and cp.id != only:
            continue
        results.append(run_problem(cp))
    return results
