"""Doolittle's tables.

Normal equations are taken in Doolittle's form ``0 = N x + n`` with ``n`` the
absolute terms.  Table A holds, per unknown, a pivot row and the
"explicit function" row (reciprocal -1/pivot and the coefficients that
express the unknown through the later ones); table B holds the single-
multiplier products whose column sums give the next pivot row.  Tables C
and D do the back substitution, E and F one pass of iterative refinement.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..arithmetic import Arithmetic, lift
from ..matrixcore import ShapeError, is_symmetric
from ..tableau import Tableau, TableauRow, _sum_round
from ._common import NotPositiveDefiniteError, load, var_names, working

__all__ = [
    "ABS",
    "doolittle_forward",
    "doolittle_back",
    "doolittle_solve",
    "doolittle_refine",
    "RefinementStep",
    "RefinementReport",
    "RefinementDivergedError",
]

ABS = "absolute term"


def _row(arith: Arithmetic, step, columns, values: dict, op, sources=(), marker=None, note=""):
    cells = []
    for c in columns:
        if marker is not None and c == marker[0]:
            cells.append(marker[1])
        elif c in values:
            cells.append(arith.wrap(values[c]))
        else:
            cells.append(None)
    return TableauRow(step, tuple(cells), tuple(sources), op, note)


def _values(t: Tableau, r: TableauRow) -> dict:
    return {c: Fraction(v.to_fraction() if hasattr(v, "to_fraction") else v)
            for c, v in zip(t.columns, r.cells) if v is not None and not isinstance(v, str)}


def doolittle_forward(N, absolute, spec="inherit", names=None):
    """Tables A and B for ``0 = N x + absolute``.

    ``spec`` is a PrecisionSpec, None for exact work, or ``"inherit"`` to
    use the operands' own precision.  Returns ``(table_a, table_b)``.
    """
    N = np.asarray(N, dtype=object)
    absolute = np.asarray(absolute, dtype=object)
    n = N.shape[0]
    if N.shape != (n, n) or absolute.shape != (n,):
        raise ShapeError("Doolittle's tables need a square N and one absolute term per row")
    if not is_symmetric(N):
        raise ValueError("Doolittle's tables assume symmetric normal equations")
    arith = working(spec, N, absolute)
    Nf, nf = load(arith, N), load(arith, absolute)
    names = var_names(n, names)
    cols_a = ("reciprocal",) + names + (ABS,)
    cols_b = names[1:] + (ABS,)
    rows_a, rows_b = [], []
    pivots, explicits = [], []
    step = 0
    for i in range(n):
        tail = names[i:] + (ABS,)
        own = {names[j]: Nf[i, j] for j in range(i, n)} | {ABS: nf[i]}
        step += 1
        if i == 0:
            rows_a.append(_row(arith, step, cols_a, own, "given"))
            vals = own
        else:
            parts, srcs = [own], [step]
            rows_b.append(_row(arith, step, cols_b, own, "given"))
            for k in range(i):
                estep, evals = explicits[k]
                pstep, pvals = pivots[k]
                m = evals[names[i]]
                step += 1
                prod = {c: arith.mul(m, pvals[c]) for c in tail}
                rows_b.append(_row(arith, step, cols_b, prod, "product", (estep, pstep)))
                parts.append(prod)
                srcs.append(step)
            step += 1
            vals = {c: _sum_round(arith, [p[c] for p in parts]) for c in tail}
            rows_a.append(_row(arith, step, cols_a, vals, "sum", srcs))
        pivots.append((step, vals))
        pivot = vals[names[i]]
        if pivot <= 0:
            raise NotPositiveDefiniteError(f"pivot for {names[i]} is {pivot}; N is not positive definite")
        recip = arith.div(Fraction(-1), pivot)
        ev = {"reciprocal": recip} | {c: arith.mul(vals[c], recip) for c in tail[1:]}
        step += 1
        rows_a.append(_row(arith, step, cols_a, ev, "explicit", (pivots[-1][0],), (names[i], f"{names[i]}=")))
        explicits.append((step, ev))
    title_spec = arith.spec
    ta = Tableau("doolittle-A", cols_a, tuple(rows_a), title_spec, title="Table A")
    tb = Tableau("doolittle-B", cols_b, tuple(rows_b), title_spec, title="Table B")
    return ta, tb


def _explicit_rows(ta: Tableau) -> list:
    return [r for r in ta.rows if r.op == "explicit"]


def _names_of(ta: Tableau) -> tuple:
    return ta.columns[1:-1]


def doolittle_back(ta: Tableau):
    """Tables C and D and the solution (in variable order).

    Table C copies reciprocals and explicit-function coefficients from
    table A; each row of table D applies one solved value to one column of
    table C, and column sums give the unknowns from last to first.
    """
    arith = Arithmetic(ta.spec)
    names = _names_of(ta)
    explicit = _explicit_rows(ta)
    step = max(r.step for r in ta.rows)
    cols_c = ("reciprocal",) + names[1:]
    rows_c = []
    for r in explicit:
        step += 1
        vals = {c: v for c, v in _values(ta, r).items() if c in cols_c}
        rows_c.append(_row(arith, step, cols_c, vals, "copy", (r.step,)))
    tc = Tableau("doolittle-C", cols_c, tuple(rows_c), ta.spec, title="Table C")
    td, x = _fold_back(arith, tc, names, step,
                       first=("constants", [r.step for r in explicit],
                              {names[i]: _values(ta, r)[ABS] for i, r in enumerate(explicit)}),
                       layout="doolittle-D", title="Table D")
    return tc, td, arith.wrap_array(np.array(x, dtype=object))


def _fold_back(arith: Arithmetic, tc: Tableau, names, step, first, layout, title):
    n = len(names)
    cvals = [_values(tc, r) for r in tc.rows]
    op, srcs, vals = first
    step += 1
    rows = [_row(arith, step, names, vals, op, srcs)]
    columns = {c: [vals[c]] for c in names}
    x = [None] * n
    for v in range(n - 1, -1, -1):
        total = _sum_round(arith, columns[names[v]])
        x[v] = total
        cells = {names[v]: total}
        for c in range(v):
            cells[names[c]] = arith.mul(total, cvals[c][names[v]])
            columns[names[c]].append(cells[names[c]])
        step += 1
        rows.append(_row(arith, step, names, cells, "fold-back", [tc.rows[c].step for c in range(v)]))
    return Tableau(layout, names, tuple(rows), tc.spec, title=title), x


def doolittle_solve(N, b, spec="inherit", names=None):
    """Solve ``N x = b`` with Doolittle's tables (absolute terms ``-b``).

    Returns ``(x, {"A": ..., "B": ..., "C": ..., "D": ...})``.
    """
    b = np.asarray(b, dtype=object)
    neg = np.array([-v for v in b], dtype=object)
    ta, tb = doolittle_forward(N, neg, spec, names)
    tc, td, x = doolittle_back(ta)
    return x, {"A": ta, "B": tb, "C": tc, "D": td}


class RefinementDivergedError(ArithmeticError):
    """The residual grew; the report so far is attached."""

    def __init__(self, message, report):
        super().__init__(message)
        self.report = report


@dataclass
class RefinementStep:
    x: np.ndarray            # the approximation the residual was taken at
    residual: np.ndarray     # r = N x + n, rounded to the working spec
    correction: np.ndarray   # e with N e + r = 0
    table_e: Tableau | None = None
    table_f: Tableau | None = None


@dataclass
class RefinementReport:
    iterations: list = field(default_factory=list)
    solution: np.ndarray | None = None
    tables: dict = field(default_factory=dict)
    final_residual_norm: Fraction | None = None   # exact max-norm at ``solution``

    def residual_norms(self) -> list:
        return [max((abs(v) for v in it.residual), default=Fraction(0)) for it in self.iterations]


def _exact_residual(N, x, absolute) -> list:
    n = len(x)
    return [sum((N[i, j] * x[j] for j in range(n)), Fraction(0)) + absolute[i] for i in range(n)]


def doolittle_refine(N, absolute, x1, spec=None, max_iters: int = 1, names=None) -> RefinementReport:
    """Doolittle's iterative refinement of an approximate solution ``x1`` of
    ``0 = N x + absolute``.

    Tables A-D are formed at ``spec``; residuals are computed exactly and
    then rounded to ``spec``; table E repeats table B's constant-column work
    on the residuals and table F repeats table D.  The corrected solution
    ``x + e`` is kept exact (Doolittle added the two approximations by
    hand).  Iteration stops after ``max_iters`` passes, at a zero
    residual, or when the residual stops decreasing; a growing residual
    raises :class:`RefinementDivergedError`.
    """
    ta, tb = doolittle_forward(N, absolute, spec, names)
    tc, td, _ = doolittle_back(ta)
    arith = Arithmetic(ta.spec)
    names = _names_of(ta)
    n = len(names)
    Nf, af = lift(N), lift(absolute)
    x = lift(x1)
    report = RefinementReport(tables={"A": ta, "B": tb, "C": tc, "D": td})
    cvals = [_values(tc, r) for r in tc.rows]
    step = max(r.step for r in td.rows)
    prev = None
    for _ in range(max_iters):
        exact_r = _exact_residual(Nf, x, af)
        norm = max((abs(v) for v in exact_r), default=Fraction(0))
        if prev is not None and norm > prev:
            report.solution = x
            raise RefinementDivergedError(f"residual grew from {prev} to {norm}", report)
        if prev is not None and norm == prev:
            break
        r = [arith.round(v) for v in exact_r]
        if not any(r):
            report.iterations.append(RefinementStep(x.copy(), arith.wrap_array(np.array(r, dtype=object)),
                                                    np.array([Fraction(0)] * n, dtype=object)))
            prev = norm
            break
        # table E: column sums s_k of the residuals reduced like table B's constants
        step += 1
        rows_e = [_row(arith, step, names, dict(zip(names, r)), "given")]
        columns = {c: [v] for c, v in zip(names, r)}
        s = []
        for k in range(n):
            total = _sum_round(arith, columns[names[k]])
            s.append(total)
            cells = {names[k]: total}
            for c in names[k + 1:]:
                cells[c] = arith.mul(total, cvals[k][c])
                columns[c].append(cells[c])
            step += 1
            rows_e.append(_row(arith, step, names, cells, "fold-forward", (tc.rows[k].step,)))
        te = Tableau("doolittle-E", names, tuple(rows_e), ta.spec, title="Table E")
        first = {names[k]: arith.mul(s[k], cvals[k]["reciprocal"]) for k in range(n)}
        srcs = [row.step for row in rows_e[1:]] + [row.step for row in tc.rows]
        tf, e = _fold_back(arith, tc, names, step, ("scale", srcs, first), "doolittle-F", "Table F")
        step = max(row.step for row in tf.rows)
        report.iterations.append(RefinementStep(x.copy(), arith.wrap_array(np.array(r, dtype=object)),
                                                np.array(e, dtype=object), te, tf))
        x = np.array([xi + ei for xi, ei in zip(x, e)], dtype=object)
        prev = norm
    report.solution = x
    final = max((abs(v) for v in _exact_residual(Nf, x, af)), default=Fraction(0))
    report.final_residual_norm = final
    if prev is not None and final > prev:
        raise RefinementDivergedError(f"residual grew from {prev} to {final}", report)
    return report
