"""The method of single division, row-numbered the way Dwyer printed it.

Rows 1..n are the equations.  Each stage divides the current pivot row by
its leading coefficient, then eliminates that unknown from the remaining
rows of the stage.  The last division starts the back substitution; each
later row solves one more unknown from a divided row and the rows already
solved.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..matrixcore import ShapeError, SingularMatrixError, check_consistency
from ..tableau import Tableau, TableauRow
from ._common import load, working

__all__ = ["dwyer_single_division"]


def dwyer_single_division(A, b, spec="inherit"):
    """Solve ``A x = b``; returns ``(x, tableau)`` with the tableau numbered
    and annotated as in the historical table."""
    A = np.asarray(A, dtype=object)
    b = np.asarray(b, dtype=object)
    n = A.shape[0]
    if n == 0 or A.shape != (n, n) or b.shape != (n,):
        raise ShapeError(f"single division needs a square matrix and matching constants, got {A.shape}, {b.shape}")
    arith = working(spec, A, b)
    Af, bf = load(arith, A), load(arith, b)
    cols = tuple(f"x{i + 1}" for i in range(n)) + ("r.h.s.",)
    w = arith.wrap
    rows = []

    def emit(values: dict, op, sources=(), note=""):
        cells = tuple(w(values[j]) if j in values else None for j in range(n + 1))
        rows.append(TableauRow(len(rows) + 1, cells, tuple(sources), op, note))
        return len(rows), values

    current = []
    for i in range(n):
        vals = {j: Af[i, j] for j in range(n)} | {n: bf[i]}
        current.append(emit(vals, "given", note="original equations" if i == 0 else ""))

    divided = []
    for k in range(n):
        (pstep, pvals), rest = current[0], current[1:]
        lead = pvals[k]
        if lead == 0:
            check_consistency(A, b)
            raise SingularMatrixError(f"zero pivot at stage {k + 1}", step=k)
        note = "back-substitution" if k == n - 1 else f"elimination, part {k + 1}"
        dvals = {k: Fraction(1)} | {j: arith.div(pvals[j], lead) for j in range(k + 1, n + 1)}
        divided.append(emit(dvals, "divide", (pstep,), note))
        dstep = divided[-1][0]
        nxt = []
        for tstep, tvals in rest:
            m = tvals[k]
            evals = {j: arith.dot(tvals[j], [(m, dvals[j])], subtract=True) for j in range(k + 1, n + 1)}
            nxt.append(emit(evals, "eliminate", (dstep, tstep)))
        current = nxt

    x = [None] * n
    x[n - 1] = divided[-1][1][n]
    solved = [divided[-1][0]]
    for k in range(n - 2, -1, -1):
        dstep, dvals = divided[k]
        pairs = [(dvals[j], x[j]) for j in range(n - 1, k, -1)]
        x[k] = arith.dot(dvals[n], pairs, subtract=True)
        step, _ = emit({k: Fraction(1), n: x[k]}, "backsub", (dstep, *solved))
        solved.append(step)
    tab = Tableau("dwyer", cols, tuple(rows), arith.spec, split=n, title="Method of single division")
    return arith.wrap_array(np.array(x, dtype=object)), tab
