"""Cross-method verification.

:func:`verify_all` runs every applicable method on one problem, compares
the solutions pairwise and checks the structural relations between the
methods (one LDU decomposition, differently apportioned).  Failures are
report contents, never exceptions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from ..arithmetic import lift, spec_of
from ..compact import NotPositiveDefiniteError, cholesky_squared, crout_solve
from ..eliminate import LinearSystem, fraction_free_solve
from ..leastsq import CASE1, LsqProblem, bracket_from_normal, bracket_init, bracket_reduce_all, build_normal
from ..matrixcore import (InconsistentSystemError, SingularMatrixError, check_consistency, is_symmetric,
                          ldu_decompose, mat_vec, transpose)
from ..scalar import PrecisionSpec, round_to
from ..tableau import replay_tableau
from .methods import lsq_with, solve_with

__all__ = ["VerificationReport", "verify_all", "CONSISTENT_FAILURE"]

CONSISTENT_FAILURE = "consistent-failure"
# methods that never reorder equations; a zero natural pivot makes them inapplicable
_NATURAL = {"schoolbook", "rolle", "crout", "dwyer", "satterthwaite", "doolittle", "cholesky"}


@dataclass
class VerificationReport:
    exact: bool
    solutions: dict = field(default_factory=dict)       # method -> tuple of Fractions
    errors: dict = field(default_factory=dict)          # method -> message
    skipped: dict = field(default_factory=dict)         # method -> reason
    discrepancies: dict = field(default_factory=dict)   # (m1, m2) -> max |difference|
    invariants: dict = field(default_factory=dict)      # name -> bool
    flags: list = field(default_factory=list)
    spec: PrecisionSpec | None = None                   # for display only

    @property
    def ok(self) -> bool:
        if self.flags or self.errors or not self.solutions or not all(self.invariants.values()):
            return False
        return not self.exact or all(v == 0 for v in self.discrepancies.values())

    def _fmt(self, v) -> str:
        return str(v) if self.spec is None else round_to(v, self.spec).plain()

    def summary(self) -> str:
        lines = []
        for m, x in self.solutions.items():
            lines.append(f"{m:17} " + " ".join(self._fmt(v) for v in x))
        for m, why in self.skipped.items():
            lines.append(f"{m:17} skipped: {why}")
        for m, msg in self.errors.items():
            lines.append(f"{m:17} error: {msg}")
        worst = max(self.discrepancies.values(), default=Fraction(0))
        lines.append(f"max pairwise discrepancy: {self._fmt(worst)}")
        for name, good in self.invariants.items():
            lines.append(f"{'pass' if good else 'FAIL'} {name}")
        for f in self.flags:
            lines.append(f"flag: {f}")
        lines.append("OK" if self.ok else "FAILED")
        return "\n".join(lines) + "\n"


def _record(report: VerificationReport, name: str, fn):
    try:
        out = fn()
    except (SingularMatrixError, NotPositiveDefiniteError) as exc:
        report.errors[name] = f"{type(exc).__name__}: {exc}"
        return None
    except Exception as exc:                       # report, don't raise
        report.errors[name] = f"{type(exc).__name__}: {exc}"
        return None
    report.solutions[name] = tuple(lift(out.x))
    return out


def _pairwise(report: VerificationReport):
    for (m1, x1), (m2, x2) in combinations(report.solutions.items(), 2):
        report.discrepancies[(m1, m2)] = max((abs(a - b) for a, b in zip(x1, x2)), default=Fraction(0))


def verify_all(problem) -> VerificationReport:
    if isinstance(problem, LsqProblem):
        return _verify_lsq(problem)
    return _verify_system(problem)


def _verify_system(system: LinearSystem) -> VerificationReport:
    spec = spec_of(system.A, system.b)
    report = VerificationReport(exact=spec is None, spec=spec)
    if system.A.shape[0] != system.A.shape[1]:
        report.flags.append("not a square system")
        return report
    A, b = system.A, system.b
    sym = is_symmetric(lift(A))
    outcomes = {}
    plan = [("schoolbook", {}), ("schoolbook-pivot", {"pivot": True}), ("fraction-free", {}),
            ("rolle", {}), ("ldu", {"pivot": True}), ("crout", {}), ("dwyer", {}), ("satterthwaite", {})]
    if sym:
        plan += [("doolittle", {}), ("cholesky", {})]
    for name, kw in plan:
        method = name.replace("-pivot", "")
        outcomes[name] = _record(report, name, lambda: solve_with(method, system, **kw))

    failed = set(report.errors)
    if failed and len(failed) == len(plan):
        report.flags.append(CONSISTENT_FAILURE)
        try:
            check_consistency(A, b)
        except InconsistentSystemError:
            report.flags.append("inconsistent")
        except SingularMatrixError:
            report.flags.append("singular")
        return report
    # natural-order methods may be inapplicable where pivoting methods succeed
    for name in list(report.errors):
        msg = report.errors[name]
        natural = name in _NATURAL and ("SingularMatrixError" in msg or "ZeroDivisionError" in msg)
        not_pd = name in ("doolittle", "cholesky") and "NotPositiveDefinite" in msg
        if natural or not_pd:
            report.skipped[name] = msg
            del report.errors[name]
    _pairwise(report)

    for name, out in outcomes.items():
        for t in (out.tableaux if out else []):
            key = f"replay {name} {t.layout}"
            context = [u for u in out.tableaux if u is not t]
            report.invariants[key] = replay_tableau(t, *context) == []

    if report.exact:
        fa, fb = lift(A), lift(b)
        for name, x in report.solutions.items():
            r = mat_vec(fa, np.array(x, dtype=object)) - fb
            report.invariants[f"zero residual {name}"] = all(v == 0 for v in r)
        _structure_invariants(report, system, outcomes, sym)
    return report


def _structure_invariants(report, system, outcomes, sym):
    A = lift(system.A)
    fact, _ = ldu_decompose(A, pivoting=True)
    report.invariants["P A = L D U"] = bool(np.all(fact.reconstruct() == fact.permute(A)))
    if all(v == int(v) for v in lift(system.augmented).ravel()) and "fraction-free" in report.solutions:
        _, trace = fraction_free_solve(system)
        report.invariants["fraction-free intermediates integral"] = all(
            Fraction(v).denominator == 1 for _, m in trace.snapshots for v in m.ravel())
    try:
        nat, _ = ldu_decompose(A, pivoting=False)
    except SingularMatrixError:
        return
    n = A.shape[0]
    crout = outcomes.get("crout")
    if crout:
        aux = lift(np.array([r.cells for r in crout.tableaux[0].rows], dtype=object))
        LD, U = lift(nat.LD), lift(nat.U)
        report.invariants["crout = (L D) U"] = all(
            aux[i, j] == (LD[i, j] if j <= i else U[i, j]) for i in range(n) for j in range(n))
    if sym and all(lift(nat.D)[i, i] > 0 for i in range(n)):
        doo = outcomes.get("doolittle")
        if doo:
            ta = doo.tableaux[0]
            pivots = [r for r in ta.rows if r.op in ("given", "sum")]
            DU = lift(nat.DU)
            names = ta.columns[1:-1]
            report.invariants["doolittle pivot rows = D U"] = all(
                lift(np.array([r.cells[ta.col(c)] for c in names[i:]], dtype=object)).tolist()
                == DU[i, i:].tolist() for i, r in enumerate(pivots))
        sq = cholesky_squared(A, lift(system.b))
        L, D = sq.L, sq.D
        report.invariants["cholesky beta^2 = L^2 D"] = all(
            sq.beta_sq[i, j] == (L[i, j] ** 2 * D[j, j] if j <= i else 0) for i in range(n) for j in range(n))
        bbt = np.array([[sum((L[i, k] * L[j, k] * D[k, k] for k in range(n)), Fraction(0)) for j in range(n)]
                        for i in range(n)], dtype=object)
        report.invariants["beta beta^t = N"] = bool(np.all(bbt == A))


def _verify_lsq(problem: LsqProblem) -> VerificationReport:
    spec = spec_of(problem.A, problem.b)
    report = VerificationReport(exact=spec is None, spec=spec)
    outcomes = {m: _record(report, m, lambda m=m: lsq_with(m, problem)) for m in ("bracket", "doolittle", "cholesky")}
    N, rhs = build_normal(problem)
    report_crout = _record(report, "crout", lambda: _crout_outcome(N, rhs, problem))
    outcomes["crout"] = report_crout
    if len(report.errors) == len(outcomes):
        report.flags.append(CONSISTENT_FAILURE)
        return report
    _pairwise(report)
    for name, out in outcomes.items():
        for t in (out.tableaux if out else []):
            report.invariants[f"replay {name} {t.layout}"] = \
                replay_tableau(t, *[u for u in out.tableaux if u is not t]) == []
    if not report.exact:
        return report
    A, b = lift(problem.A), lift(problem.b)
    if problem.kind == CASE1:
        t = bracket_reduce_all(bracket_init(A, b))
    else:
        t = bracket_reduce_all(bracket_from_normal(N, rhs))
    nn = t.get(t.mu, t.mu, t.mu)
    for name, x in report.solutions.items():
        x = np.array(x, dtype=object)
        r = b - mat_vec(A, x)
        if problem.kind == CASE1:
            report.invariants[f"A^t (b - A x) = 0 {name}"] = all(v == 0 for v in mat_vec(transpose(A), r))
            report.invariants[f"[nn] = residual sum of squares {name}"] = nn == sum((v * v for v in r), Fraction(0))
        else:
            report.invariants[f"A x = b {name}"] = all(v == 0 for v in r)
            report.invariants[f"[nn] = -|x|^2 {name}"] = nn == -sum((v * v for v in x), Fraction(0))
    return report


def _crout_outcome(N, rhs, problem):
    from .methods import Outcome
    from ..leastsq import correlate_recover
    u, tab, _ = crout_solve(N, rhs)
    return Outcome(u if problem.kind == CASE1 else correlate_recover(problem, u), [tab])
