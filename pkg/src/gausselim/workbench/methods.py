"""One calling convention for every solver, used by the corpus runner, the
verifier and the CLI."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..arithmetic import IrrationalRootError, lift
from ..compact import (cholesky_normal_solve, cholesky_squared, crout_solve, doolittle_refine, doolittle_solve,
                       dwyer_single_division, satterthwaite_solve)
from ..eliminate import LinearSystem, fraction_free_solve, render_rolle, rolle_solve, schoolbook_solve
from ..leastsq import CASE1, LsqProblem, bracket_from_normal, bracket_init, build_normal, correlate_recover, \
    gauss_reduce_solve
from ..matrixcore import ldu_solve
from ..scalar import PrecisionSpec, round_to

__all__ = ["SOLVE_METHODS", "LSQ_METHODS", "Outcome", "coerce", "solve_with", "lsq_with", "UsageError"]

SOLVE_METHODS = ("schoolbook", "fraction-free", "rolle", "ldu", "doolittle", "crout", "cholesky", "dwyer",
                 "satterthwaite")
LSQ_METHODS = ("bracket", "doolittle", "cholesky")


class UsageError(ValueError):
    """The method cannot be asked for this (option or problem shape)."""


@dataclass
class Outcome:
    x: np.ndarray
    tableaux: list = field(default_factory=list)
    trace: object = None
    text: str = ""           # any extra rendering (Rolle's two columns)
    notes: list = field(default_factory=list)


def coerce(arr, spec: PrecisionSpec | None) -> np.ndarray:
    """Values of ``arr`` as Fractions (spec None) or rounded to ``spec``."""
    out = lift(arr)
    if spec is not None:
        flat = [round_to(v, spec) for v in out.ravel()]
        out = np.array(flat, dtype=object).reshape(out.shape)
    return out


def solve_with(method: str, system: LinearSystem, pivot: bool = False, order=None, refine: int = 0) -> Outcome:
    """Solve a square system with the named method, in the data's own precision."""
    if method not in SOLVE_METHODS:
        raise UsageError(f"unknown method {method!r}")
    if pivot and method not in ("schoolbook", "ldu"):
        raise UsageError(f"--pivot applies to schoolbook and ldu, not {method}")
    if refine and method != "doolittle":
        raise UsageError("--refine applies to the doolittle method")
    system.require_square()
    A, b = system.A, system.b
    if method == "schoolbook":
        x, trace = schoolbook_solve(system, pivoting=pivot)
        return Outcome(x, trace=trace)
    if method == "fraction-free":
        x, trace = fraction_free_solve(system)
        return Outcome(x, trace=trace)
    if method == "rolle":
        x, trace = rolle_solve(system, order=order)
        return Outcome(x, trace=trace, text=render_rolle(trace))
    if method == "ldu":
        x, fact, trace = ldu_solve(A, b, pivoting=pivot)
        return Outcome(x, trace=trace)
    if method == "crout":
        x, tab, _ = crout_solve(A, b)
        return Outcome(x, [tab])
    if method == "dwyer":
        x, tab = dwyer_single_division(A, b)
        return Outcome(x, [tab])
    if method == "satterthwaite":
        return Outcome(satterthwaite_solve(A, b))
    if method == "doolittle":
        names = system.names
        x, tabs = doolittle_solve(A, b, names=names)
        out = Outcome(x, [tabs[k] for k in "ABCD"])
        if refine:
            neg = np.array([-v for v in lift(b)], dtype=object)
            report = doolittle_refine(lift(A), neg, lift(x), spec=tabs["A"].spec, max_iters=refine, names=names)
            for it in report.iterations:
                out.tableaux += [t for t in (it.table_e, it.table_f) if t is not None]
            out.x = report.solution
            out.notes.append("refined solution is exact sum x + e")
        return out
    # cholesky on a symmetric positive definite system
    try:
        res = cholesky_normal_solve(A, b)
        return Outcome(res.lam, [res.tableau])
    except IrrationalRootError:
        sq = cholesky_squared(A, b)
        return Outcome(sq.lam, notes=["irrational square roots; solved through the squared form N = L D L^t"])


def lsq_with(method: str, problem: LsqProblem) -> Outcome:
    """Least-squares solution (case 1) or minimum-norm solution (case 2)."""
    if method not in LSQ_METHODS:
        raise UsageError(f"unknown method {method!r}")
    N, rhs = build_normal(problem)
    case1 = problem.kind == CASE1

    def finish(u):
        return u if case1 else correlate_recover(problem, u)

    if method == "bracket":
        t = bracket_init(problem.A, problem.b) if case1 else bracket_from_normal(N, rhs)
        return Outcome(finish(gauss_reduce_solve(t)))
    if method == "doolittle":
        u, tabs = doolittle_solve(N, rhs)
        return Outcome(finish(u), [tabs[k] for k in "ABCD"])
    try:
        res = cholesky_normal_solve(N, rhs)
        return Outcome(finish(res.lam), [res.tableau])
    except IrrationalRootError:
        sq = cholesky_squared(N, rhs)
        return Outcome(finish(sq.lam), notes=["irrational square roots; solved through the squared form"])
