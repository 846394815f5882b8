"""Crout's compact elimination over the augmented matrix.

One auxiliary matrix replaces the whole elimination.  Entries on and below
the diagonal are the original entry less the sum of products of row
entries to the left and column entries above; entries right of the
diagonal (constants included) are formed the same way and then divided by
the diagonal entry of their row.  Each entry is one accumulated product
sum with a single rounding.  Back substitution runs on the entries right of
the diagonal and the transformed constants.
"""
from __future__ import annotations

import numpy as np

from ..matrixcore import ShapeError, SingularMatrixError, check_consistency
from ..tableau import Tableau, TableauRow
from ._common import load, working

__all__ = ["crout_solve", "crout_columns"]


def crout_columns(n: int) -> tuple:
    return tuple(f"x{i + 1}" for i in range(n)) + ("r.h.s.",)


def crout_solve(A, b, spec="inherit"):
    """Solve ``A x = b`` by Crout's rules; returns ``(x, tableau, ops)``."""
    A = np.asarray(A, dtype=object)
    b = np.asarray(b, dtype=object)
    n = A.shape[0]
    if A.shape != (n, n) or b.shape != (n,):
        raise ShapeError(f"Crout needs a square matrix and matching constants, got {A.shape}, {b.shape}")
    arith = working(spec, A, b)
    g = np.column_stack([load(arith, A), load(arith, b)]) if n else np.empty((0, 1), dtype=object)
    aux = np.empty((n, n + 1), dtype=object)
    for i in range(n):
        # column i on and below the diagonal
        for r in range(i, n):
            aux[r, i] = arith.dot(g[r, i], [(aux[r, k], aux[k, i]) for k in range(i)], subtract=True)
        if aux[i, i] == 0:
            check_consistency(A, b)
            raise SingularMatrixError(f"zero diagonal entry at step {i + 1}", step=i)
        # row i right of the diagonal, constants included
        for c in range(i + 1, n + 1):
            aux[i, c] = arith.dot(g[i, c], [(aux[i, k], aux[k, c]) for k in range(i)],
                                  subtract=True, divisor=aux[i, i])
    x = [None] * n
    for i in range(n - 1, -1, -1):
        x[i] = arith.dot(aux[i, n], [(aux[i, k], x[k]) for k in range(i + 1, n)], subtract=True)
    rows = tuple(TableauRow(i + 1, tuple(arith.wrap(v) for v in aux[i]), (), "crout") for i in range(n))
    given = np.array([[arith.wrap(v) for v in row] for row in g], dtype=object).reshape(n, n + 1)
    tab = Tableau("crout", crout_columns(n), rows, arith.spec, split=n, title="Crout auxiliary matrix",
                  given=given)
    return arith.wrap_array(np.array(x, dtype=object)), tab, arith.ops
