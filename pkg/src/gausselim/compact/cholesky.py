"""Cholesky's method as Benoit published it.

Condition equations ``A x + K = 0`` (here ``K = -b``) have normal equations
``N lambda + K = 0`` with ``N = A A^t``.  Cholesky replaces them by the
triangular condition equations ``beta y + K = 0`` having the same normal
equations, so ``beta^t lambda = y`` and finally ``x = A^t lambda``.

Square roots are rarely rational.  In exact mode :func:`cholesky_solve`
raises :class:`IrrationalRootError` unless every root is exact;
:func:`cholesky_squared` verifies the factorization through ``L`` and
``D`` (``beta = L D^(1/2)``) without ever taking a root.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..arithmetic import Arithmetic, IrrationalRootError, lift
from ..leastsq import CASE2, LsqProblem, build_normal
from ..matrixcore import ShapeError, forward_sub, is_symmetric, ldu_decompose, mat_vec, transpose
from ..tableau import Tableau, TableauRow
from ._common import NotPositiveDefiniteError, load, working

__all__ = [
    "CholeskyFactors",
    "SquaredCholesky",
    "cholesky_factor",
    "cholesky_normal_solve",
    "cholesky_solve",
    "cholesky_squared",
    "IrrationalRootError",
]


@dataclass
class CholeskyFactors:
    beta: np.ndarray
    y: np.ndarray
    lam: np.ndarray
    x: np.ndarray | None = None
    tableau: Tableau | None = None


@dataclass
class SquaredCholesky:
    """Exact squares of Cholesky's quantities: beta_sq[i,j] = beta[i,j]**2,
    y_sq[i] = y[i]**2, with signs kept separately; lam is exact."""

    L: np.ndarray
    D: np.ndarray
    beta_sq: np.ndarray
    beta_sign: np.ndarray
    y_sq: np.ndarray
    y_sign: np.ndarray
    lam: np.ndarray


def cholesky_factor(N, spec="inherit") -> np.ndarray:
    """beta with beta beta^t = N, column by column; one rounding per entry."""
    N = np.asarray(N, dtype=object)
    arith = working(spec, N)
    return arith.wrap_array(_beta(arith, load(arith, N)))


def _beta(arith: Arithmetic, N: np.ndarray) -> np.ndarray:
    p = N.shape[0]
    if N.shape != (p, p) or not is_symmetric(N):
        raise ShapeError("Cholesky needs a square symmetric matrix")
    beta = np.empty((p, p), dtype=object)
    beta.fill(Fraction(0))
    for i in range(p):
        inner = N[i, i] - sum((beta[i, k] ** 2 for k in range(i)), Fraction(0))
        arith.ops.muls += i
        arith.ops.subs += i
        if inner <= 0:
            raise NotPositiveDefiniteError(f"non-positive value {inner} under the root in column {i + 1}")
        beta[i, i] = arith.sqrt(inner)
        if beta[i, i] == 0:
            raise NotPositiveDefiniteError(f"root rounds to zero in column {i + 1}")
        for j in range(i + 1, p):
            pairs = [(beta[i, k], beta[j, k]) for k in range(i)]
            beta[j, i] = arith.dot(N[i, j], pairs, subtract=True, divisor=beta[i, i])
    return beta


def _substitute(arith: Arithmetic, beta, K):
    p = beta.shape[0]
    y = [None] * p
    for i in range(p):
        pairs = [(beta[i, k], y[k]) for k in range(i)]
        y[i] = arith.dot(-K[i], pairs, subtract=True, divisor=beta[i, i])
    lam = [None] * p
    for i in range(p - 1, -1, -1):
        pairs = [(beta[k, i], lam[k]) for k in range(i + 1, p)]
        lam[i] = arith.dot(y[i], pairs, subtract=True, divisor=beta[i, i])
    return y, lam


def _benoit(arith: Arithmetic, N, K, beta, y, lam) -> Tableau:
    p = N.shape[0]
    cols = ("",) + tuple(f"λ{j + 1}" for j in range(p)) + ("K", "λ")
    w = arith.wrap
    rows = []
    for i in range(p):
        cells = [None] * len(cols)
        for j in range(i + 1):
            cells[j] = w(beta[i, j])
        for j in range(i, p):
            cells[j + 1] = w(N[i, j])
        cells[p + 1] = w(K[i])
        cells[p + 2] = w(lam[i])
        rows.append(TableauRow(i + 1, tuple(cells), (), "benoit"))
    rows.append(TableauRow(p + 1, tuple([w(v) for v in y] + [None] * 3), (), "benoit-y", "y"))
    return Tableau("benoit", cols, tuple(rows), arith.spec, title="Benoit table")


def cholesky_normal_solve(N, rhs, spec="inherit") -> CholeskyFactors:
    """Solve symmetric positive definite ``N lambda = rhs`` (``K = -rhs``)."""
    N = np.asarray(N, dtype=object)
    rhs = np.asarray(rhs, dtype=object)
    if rhs.shape != (N.shape[0],):
        raise ShapeError("one right-hand side per normal equation")
    arith = working(spec, N, rhs)
    Nf = load(arith, N)
    K = [-v for v in load(arith, rhs)]
    beta = _beta(arith, Nf)
    y, lam = _substitute(arith, beta, K)
    tab = _benoit(arith, Nf, K, beta, y, lam)
    wrap = arith.wrap_array
    return CholeskyFactors(wrap(beta), wrap(np.array(y, dtype=object)), wrap(np.array(lam, dtype=object)),
                           tableau=tab)


def cholesky_solve(problem: LsqProblem, spec="inherit") -> CholeskyFactors:
    """Minimum-norm solution of ``A x = b`` (case 2) by Cholesky's method."""
    if problem.kind != CASE2:
        raise ValueError("cholesky_solve handles case-2 problems; use cholesky_normal_solve for case 1")
    N, rhs = build_normal(problem)
    out = cholesky_normal_solve(N, rhs, spec)
    arith = working(spec, problem.A, problem.b)
    out.x = mat_vec(arith.wrap_array(load(arith, transpose(problem.A))), out.lam, arith)
    return out


def cholesky_squared(N, rhs) -> SquaredCholesky:
    """Exact squared-form Cholesky quantities from ``N = L D L^t``.

    With ``g = L^-1 rhs``: beta[i,j]^2 = L[i,j]^2 D[j], y[i]^2 = g[i]^2/D[i],
    and ``L^t lambda = D^-1 g``.
    """
    N, rhs = lift(N), lift(rhs)
    if not is_symmetric(N):
        raise ShapeError("Cholesky needs a symmetric matrix")
    fact, _ = ldu_decompose(N)
    L, D = lift(fact.L), lift(fact.D)
    p = N.shape[0]
    if any(D[i, i] <= 0 for i in range(p)):
        raise NotPositiveDefiniteError("N is not positive definite")
    g = lift(forward_sub(L, rhs))
    beta_sq = np.empty((p, p), dtype=object)
    beta_sign = np.empty((p, p), dtype=object)
    for i in range(p):
        for j in range(p):
            beta_sq[i, j] = L[i, j] ** 2 * D[j, j] if j <= i else Fraction(0)
            beta_sign[i, j] = (L[i, j] > 0) - (L[i, j] < 0) if j <= i else 0
    y_sq = np.array([g[i] ** 2 / D[i, i] for i in range(p)], dtype=object)
    y_sign = np.array([(g[i] > 0) - (g[i] < 0) for i in range(p)], dtype=object)
    scaled = np.array([g[i] / D[i, i] for i in range(p)], dtype=object)
    lam = lift(_upper_unit_solve(L, scaled))
    return SquaredCholesky(L, D, beta_sq, beta_sign, y_sq, y_sign, lam)


def _upper_unit_solve(L, rhs):
    """Solve L^t v = rhs for unit lower L."""
    p = L.shape[0]
    v = [None] * p
    for i in range(p - 1, -1, -1):
        v[i] = rhs[i] - sum((L[k, i] * v[k] for k in range(i + 1, p)), Fraction(0))
    return np.array(v, dtype=object)
