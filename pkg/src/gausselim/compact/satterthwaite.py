"""Satterthwaite's triple factorization ``A = (R1 + I) S1 (I + T1)`` and his
inverse improvement ``(F A)^-1 F``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..arithmetic import arith_for, lift
from ..matrixcore import (SingularMatrixError, back_sub, check_consistency, forward_sub, identity, inverse,
                          ldu_decompose, mat_mul)

__all__ = ["TripleFactorization", "satterthwaite_factor", "satterthwaite_solve", "improve_inverse"]


@dataclass
class TripleFactorization:
    R1: np.ndarray   # strictly lower ("prediagonal")
    S1: np.ndarray   # diagonal
    T1: np.ndarray   # strictly upper ("postdiagonal")

    def lower(self) -> np.ndarray:
        return self.R1 + identity(self.R1.shape[0])

    def upper(self) -> np.ndarray:
        return identity(self.T1.shape[0]) + self.T1

    def reconstruct(self) -> np.ndarray:
        return mat_mul(mat_mul(self.lower(), self.S1), self.upper())


def satterthwaite_factor(A) -> TripleFactorization:
    """Natural-order LDU repackaged as strictly triangular parts plus a diagonal."""
    fact, _ = ldu_decompose(A, pivoting=False)
    n = fact.n
    L, U = lift(fact.L), lift(fact.U)
    return TripleFactorization(L - identity(n), lift(fact.D), U - identity(n))


def satterthwaite_solve(A, b) -> np.ndarray:
    """x = (I + T1)^-1 S1^-1 (R1 + I)^-1 b."""
    A = np.asarray(A, dtype=object)
    arith = arith_for(A, np.asarray(b, dtype=object))
    try:
        f = satterthwaite_factor(A)
    except SingularMatrixError:
        check_consistency(A, b)
        raise
    y = lift(forward_sub(arith.wrap_array(f.lower()), b, arith))
    z = np.array([arith.div(y[i], f.S1[i, i]) for i in range(len(y))], dtype=object)
    return back_sub(arith.wrap_array(f.upper()), arith.wrap_array(z), arith)


def improve_inverse(A, F) -> np.ndarray:
    """(F A)^-1 F, the inner inverse obtained by factoring F A."""
    FA = mat_mul(F, A)
    try:
        inner = inverse(FA)
    except SingularMatrixError as exc:
        raise SingularMatrixError("F A is singular; F cannot be improved", step=exc.step) from exc
    return mat_mul(inner, F)
