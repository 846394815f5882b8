"""Dense matrix kernels: products, residuals, triangular solves, and the
LDU decomposition built from the sequence of reduced matrices.

The LDU kernel follows the classical recurrence

    A(i+1)[j,k] = A(i)[j,k] - A(i)[j,i] * A(i)[i,k] / A(i)[i,i]     (j, k > i)

and reads the factors straight off the reduced matrices:

    L[j,i] = A(i)[j,i] / A(i)[i,i],  D[i,i] = A(i)[i,i],  U[i,k] = A(i)[i,k] / A(i)[i,i].
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .arithmetic import Arithmetic, OpCounter, arith_for, lift, spec_of

__all__ = [
    "SingularMatrixError",
    "InconsistentSystemError",
    "ShapeError",
    "ElementaryStep",
    "TraceLog",
    "Factorization",
    "identity",
    "transpose",
    "mat_mul",
    "mat_vec",
    "residual",
    "ldu_decompose",
    "ldu_solve",
    "forward_sub",
    "back_sub",
    "steps_to_factor",
    "replay_steps",
    "column_eliminate",
    "inverse",
    "check_consistency",
    "is_symmetric",
]


class ShapeError(ValueError):
    """Operands are not conformable."""


class SingularMatrixError(ArithmeticError):
    """Elimination met a zero (or negligible) pivot it could not swap away.

    ``step`` is the 0-based elimination stage at which it happened.
    """

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class InconsistentSystemError(SingularMatrixError):
    """The equations contradict each other (a zero row with nonzero rhs)."""


@dataclass(frozen=True)
class ElementaryStep:
    """One row operation.

    ``row-subtract-multiple``: row[target] -= multiplier * row[source]
    ``row-swap``:             exchange row[target] and row[source]
    ``row-scale``:            row[target] *= multiplier
    """

    kind: str
    target: int
    source: int | None = None
    multiplier: Fraction | None = None

    KINDS = ("row-subtract-multiple", "row-swap", "row-scale")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown step kind {self.kind!r}")
        if self.kind == "row-subtract-multiple" and self.source == self.target:
            raise ValueError("row-subtract-multiple needs distinct rows")

    @classmethod
    def subtract(cls, target: int, source: int, multiplier) -> "ElementaryStep":
        return cls("row-subtract-multiple", target, source, Fraction(multiplier))

    @classmethod
    def swap(cls, i: int, j: int) -> "ElementaryStep":
        return cls("row-swap", i, j)

    @classmethod
    def scale(cls, target: int, multiplier) -> "ElementaryStep":
        return cls("row-scale", target, None, Fraction(multiplier))

    def __str__(self) -> str:
        # 1-based rows, as a hand computer would number them
        t = self.target + 1
        if self.kind == "row-swap":
            return f"swap rows {t} and {self.source + 1}"
        if self.kind == "row-scale":
            return f"row {t} *= {self.multiplier}"
        return f"row {t} -= {self.multiplier} * row {self.source + 1}"


@dataclass
class TraceLog:
    steps: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)   # (label, matrix) pairs
    ops: OpCounter = field(default_factory=OpCounter)

    def snapshot(self, label: str, matrix: np.ndarray) -> None:
        self.snapshots.append((label, matrix.copy()))


@dataclass
class Factorization:
    """``A[perm] == L @ D @ U`` with unit-triangular L, U and diagonal D."""

    perm: tuple
    L: np.ndarray
    D: np.ndarray
    U: np.ndarray

    @property
    def n(self) -> int:
        return self.L.shape[0]

    def permute(self, a: np.ndarray) -> np.ndarray:
        return np.asarray(a, dtype=object)[list(self.perm)]

    def reconstruct(self) -> np.ndarray:
        return mat_mul(mat_mul(self.L, self.D), self.U)

    @property
    def DU(self) -> np.ndarray:
        return mat_mul(self.D, self.U)

    @property
    def LD(self) -> np.ndarray:
        return mat_mul(self.L, self.D)


def identity(n: int) -> np.ndarray:
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            out[i, j] = Fraction(int(i == j))
    return out


def _zeros(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def transpose(a) -> np.ndarray:
    return np.asarray(a, dtype=object).T.copy()


def mat_mul(a, b, arith: Arithmetic | None = None) -> np.ndarray:
    """Matrix product; each entry is one accumulated dot product."""
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    arith = arith or arith_for(a, b)
    fa, fb = lift(a), lift(b)
    out = _zeros((a.shape[0], b.shape[1]))
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            out[i, j] = arith.dot(Fraction(0), zip(fa[i], fb[:, j]))
    return arith.wrap_array(out)


def mat_vec(a, x, arith: Arithmetic | None = None) -> np.ndarray:
    a = np.asarray(a, dtype=object)
    x = np.asarray(x, dtype=object)
    if a.ndim != 2 or x.ndim != 1 or a.shape[1] != x.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by vector {x.shape}")
    arith = arith or arith_for(a, x)
    fa, fx = lift(a), lift(x)
    out = np.array([arith.dot(Fraction(0), zip(fa[i], fx)) for i in range(a.shape[0])] or [],
                   dtype=object)
    return arith.wrap_array(out)


def residual(a, x, b, arith: Arithmetic | None = None) -> np.ndarray:
    """``A @ x - b``, one rounding per entry."""
    a = np.asarray(a, dtype=object)
    x = np.asarray(x, dtype=object)
    b = np.asarray(b, dtype=object)
    if a.ndim != 2 or a.shape != (b.shape[0], x.shape[0]):
        raise ShapeError(f"residual shapes {a.shape}, {x.shape}, {b.shape} do not conform")
    arith = arith or arith_for(a, x, b)
    fa, fx, fb = lift(a), lift(x), lift(b)
    out = np.array([arith.dot(-fb[i], zip(fa[i], fx)) for i in range(a.shape[0])], dtype=object)
    return arith.wrap_array(out)


def is_symmetric(a) -> bool:
    a = lift(a)
    return a.shape[0] == a.shape[1] and all(
        a[i, j] == a[j, i] for i in range(a.shape[0]) for j in range(i))


def _pivot_threshold(arith: Arithmetic, work: np.ndarray) -> Fraction:
    """Pivots smaller than this (or exactly zero) count as zero.

    In fixed mode that is one unit in the last place, taken at the scale of
    the largest entry so that sig=K behaves like frac=K on that scale.
    """
    if arith.exact:
        return Fraction(0)
    scale = max((abs(v) for v in work.ravel()), default=Fraction(1)) or Fraction(1)
    return arith.spec.ulp(scale)


def _choose_pivot(work: np.ndarray, i: int, pivoting: bool, threshold: Fraction) -> int | None:
    n = work.shape[0]
    if pivoting:
        best = max(range(i, n), key=lambda j: (abs(work[j, i]), -j))
        return None if _negligible(work[best, i], threshold) else best
    return None if _negligible(work[i, i], threshold) else i


def _negligible(v: Fraction, threshold: Fraction) -> bool:
    return v == 0 or abs(v) < threshold


def ldu_decompose(a, pivoting: bool = False) -> tuple[Factorization, TraceLog]:
    """Factor ``A[perm] = L D U`` by Gaussian elimination.

    With ``pivoting`` the largest-magnitude entry of the current column is
    moved to the diagonal (ties go to the lowest row).  The trace records
    every reduced matrix A(i) and the row operations applied.
    """
    a = np.asarray(a, dtype=object)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"LDU needs a square matrix, got {a.shape}")
    arith = arith_for(a)
    n = a.shape[0]
    work = lift(a)
    perm = list(range(n))
    L, D, U = identity(n), _zeros((n, n)), identity(n)
    trace = TraceLog(ops=arith.ops)
    threshold = _pivot_threshold(arith, work)

    for i in range(n):
        p = _choose_pivot(work, i, pivoting, threshold)
        if p is None:
            hint = "" if pivoting else " (try pivoting)"
            raise SingularMatrixError(f"zero pivot at elimination step {i + 1}{hint}", step=i)
        if p != i:
            work[[i, p]] = work[[p, i]]
            L[[i, p], :i] = L[[p, i], :i]
            perm[i], perm[p] = perm[p], perm[i]
            trace.steps.append(ElementaryStep.swap(i, p))
        trace.snapshot(f"A({i + 1})", work[i:, i:])
        pivot = work[i, i]
        D[i, i] = pivot
        for k in range(i + 1, n):
            if work[i, k] != 0:
                U[i, k] = arith.div(work[i, k], pivot)
        for j in range(i + 1, n):
            if work[j, i] == 0:
                continue
            m = arith.div(work[j, i], pivot)
            L[j, i] = m
            trace.steps.append(ElementaryStep.subtract(j, i, m))
            for k in range(i + 1, n):
                work[j, k] = arith.dot(work[j, k], [(m, work[i, k])], subtract=True)
            work[j, i] = Fraction(0)

    fact = Factorization(tuple(perm), arith.wrap_array(L), arith.wrap_array(D), arith.wrap_array(U))
    return fact, trace


def forward_sub(l, b, arith: Arithmetic | None = None) -> np.ndarray:
    """Solve a lower-triangular system by forward substitution."""
    return _triangular_solve(l, b, lower=True, arith=arith)


def back_sub(u, b, arith: Arithmetic | None = None) -> np.ndarray:
    """Solve an upper-triangular system by back substitution."""
    return _triangular_solve(u, b, lower=False, arith=arith)


def _triangular_solve(t, b, lower: bool, arith: Arithmetic | None) -> np.ndarray:
    t = np.asarray(t, dtype=object)
    b = np.asarray(b, dtype=object)
    n = t.shape[0]
    if t.shape != (n, n) or b.shape != (n,):
        raise ShapeError(f"triangular solve shapes {t.shape}, {b.shape} do not conform")
    arith = arith or arith_for(t, b)
    ft, fb = lift(t), lift(b)
    x = _zeros(n)
    order = range(n) if lower else range(n - 1, -1, -1)
    for i in order:
        others = range(i) if lower else range(i + 1, n)
        diag = ft[i, i]
        if diag == 0:
            raise SingularMatrixError(f"zero diagonal entry in row {i + 1}", step=i)
        pairs = [(ft[i, k], x[k]) for k in others if ft[i, k] != 0]
        x[i] = arith.dot(fb[i], pairs, subtract=True, divisor=None if diag == 1 else diag)
    return arith.wrap_array(x)


def ldu_solve(a, b, pivoting: bool = False):
    """Solve ``A x = b`` through LDU: forward with L, scale by D, back with U.

    Returns ``(x, factorization, trace)``; the trace's counter covers the
    factorization and all three substitution stages.
    """
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    spec_of(a, b)
    try:
        fact, trace = ldu_decompose(a, pivoting)
    except SingularMatrixError as exc:
        check_consistency(a, b)
        raise exc
    arith = Arithmetic(spec_of(a), trace.ops)
    fb = lift(fact.permute(b))
    y = lift(forward_sub(fact.L, arith.wrap_array(fb), arith))
    z = np.array([arith.div(y[i], lift(fact.D)[i, i]) for i in range(len(y))], dtype=object)
    x = back_sub(fact.U, arith.wrap_array(z), arith)
    return x, fact, trace


def check_consistency(a, b) -> None:
    """Raise InconsistentSystemError or SingularMatrixError for a singular A.

    Decided by exact rank comparison of A and [A | b].
    """
    a, b = lift(a), lift(b)
    ra = _rank(a)
    rab = _rank(np.column_stack([a, b]))
    if rab > ra:
        raise InconsistentSystemError("equations are inconsistent (zero row with nonzero rhs)")
    if ra < a.shape[1]:
        raise SingularMatrixError(f"system is singular (rank {ra} < {a.shape[1]})")


def _rank(m: np.ndarray) -> int:
    m = m.copy()
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        p = next((j for j in range(r, rows) if m[j, c] != 0), None)
        if p is None:
            continue
        m[[r, p]] = m[[p, r]]
        for j in range(r + 1, rows):
            if m[j, c] != 0:
                f = m[j, c] / m[r, c]
                m[j, c:] = [m[j, k] - f * m[r, k] for k in range(c, cols)]
        r += 1
        if r == rows:
            break
    return r


def replay_steps(m, steps: Sequence[ElementaryStep]) -> np.ndarray:
    """Apply row operations to a copy of ``m`` in exact arithmetic."""
    out = lift(m)
    for s in steps:
        if s.kind == "row-swap":
            out[[s.target, s.source]] = out[[s.source, s.target]]
        elif s.kind == "row-scale":
            out[s.target] = [s.multiplier * v for v in out[s.target]]
        else:
            out[s.target] = [v - s.multiplier * w for v, w in zip(out[s.target], out[s.source])]
    return out


def steps_to_factor(steps: Sequence[ElementaryStep], n: int) -> np.ndarray:
    """Product of the inverse elementary matrices, in application order.

    For steps recorded by a pivot-free elimination this is the unit lower
    factor L.  Swaps have no place in L and are rejected.
    """
    out = identity(n)
    for s in steps:
        if s.kind == "row-swap":
            raise ValueError("steps contain a row swap; report the permutation separately")
        if s.kind == "row-scale":
            out[:, s.target] = [v / s.multiplier for v in out[:, s.target]]
        else:
            # right-multiply by (I + m e_t e_s^T)
            out[:, s.source] = [v + s.multiplier * w for v, w in zip(out[:, s.source], out[:, s.target])]
    return out


def column_eliminate(a) -> tuple[np.ndarray, np.ndarray]:
    """Column elimination ``A M = tau`` with tau lower triangular.

    Runs the row kernel on the transpose: ``E A^T = D U`` gives
    ``A E^T = (D U)^T``, so ``M = E^T`` is upper triangular.
    """
    at = transpose(lift(a))
    fact, trace = ldu_decompose(at)
    e = replay_steps(identity(at.shape[0]), trace.steps)
    m = transpose(e)
    tau = transpose(lift(fact.DU))
    return tau, m


def inverse(a, pivoting: bool = True) -> np.ndarray:
    """Inverse by LDU and one solve per column of the identity."""
    a = np.asarray(a, dtype=object)
    arith = arith_for(a)
    n = a.shape[0]
    fact, trace = ldu_decompose(a, pivoting)
    cols = []
    fd = lift(fact.D)
    for c in range(n):
        e = arith.wrap_array(identity(n)[:, c])
        y = lift(forward_sub(fact.L, fact.permute(e), arith))
        z = arith.wrap_array(np.array([arith.div(y[i], fd[i, i]) for i in range(n)], dtype=object))
        cols.append(back_sub(fact.U, z, arith))
    return np.column_stack(cols) if cols else np.empty((0, 0), dtype=object)
