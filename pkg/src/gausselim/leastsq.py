"""Least squares the way Gauss organized it: bracket sums, their reduction,
the perfect-square decomposition of the quadratic form, and the correlate
equations of the underdetermined case.

Observation equations are written in residual form, ``w = n + a p + b q + ...``
with the constant column ``n = -b`` so that the public API can keep ``A x = b``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from string import ascii_lowercase

import numpy as np

from .arithmetic import Arithmetic, OpCounter, arith_for, lift, spec_of
from .matrixcore import ShapeError, SingularMatrixError, mat_mul, mat_vec, transpose

__all__ = [
    "LsqProblem",
    "BracketKey",
    "BracketTable",
    "build_normal",
    "bracket_init",
    "bracket_from_normal",
    "bracket_reduce",
    "bracket_reduce_all",
    "gauss_reduce_solve",
    "reduced_forms",
    "omega",
    "correlate_recover",
    "letters",
]

CASE1, CASE2 = "case1", "case2"
_LETTERS = [c for c in ascii_lowercase if c != "n"]


def letters(mu: int) -> tuple:
    """Names for mu unknown columns: a, b, c, ... (n is the constant column)."""
    if mu <= len(_LETTERS):
        return tuple(_LETTERS[:mu])
    return tuple(f"a{i + 1}" for i in range(mu))


@dataclass(frozen=True)
class LsqProblem:
    kind: str
    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        if self.kind not in (CASE1, CASE2):
            raise ValueError(f"kind must be {CASE1!r} or {CASE2!r}")
        A = np.asarray(self.A, dtype=object)
        b = np.asarray(self.b, dtype=object)
        if A.ndim != 2 or b.ndim != 1 or A.shape[0] != b.shape[0]:
            raise ShapeError(f"problem shapes {A.shape} and {b.shape} do not conform")
        rows, cols = A.shape
        if self.kind == CASE1 and rows < cols:
            raise ShapeError("case 1 (overdetermined) needs rows >= cols")
        if self.kind == CASE2 and rows > cols:
            raise ShapeError("case 2 (underdetermined) needs rows <= cols")
        spec_of(A, b)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @classmethod
    def infer(cls, A, b) -> "LsqProblem":
        A = np.asarray(A, dtype=object)
        return cls(CASE1 if A.shape[0] >= A.shape[1] else CASE2, A, b)


def build_normal(problem: LsqProblem):
    """Case 1: (A^t A, A^t b).  Case 2: (A A^t, b), with x = A^t u afterwards."""
    A, b = problem.A, problem.b
    if problem.kind == CASE1:
        at = transpose(A)
        return mat_mul(at, A), mat_vec(at, b)
    return mat_mul(A, transpose(A)), b.copy()


@dataclass(frozen=True, order=True)
class BracketKey:
    left: int
    right: int
    level: int = 0

    def __post_init__(self):
        if self.left > self.right:
            raise ValueError("bracket keys are stored with left <= right")
        if self.level > self.left:
            raise ValueError(f"[{self.left}{self.right},{self.level}] does not exist")

    def render(self, names) -> str:
        body = names[self.left] + names[self.right]
        return f"[{body}]" if self.level == 0 else f"[{body},{self.level}]"


@dataclass
class BracketTable:
    """Gauss's bracket values keyed by (letter, letter, level).

    Letter indices run 0..mu-1 for the unknowns and mu for the constant
    column n.
    """

    mu: int
    values: dict = field(default_factory=dict)
    spec: object = None
    ops: OpCounter = field(default_factory=OpCounter)

    @property
    def names(self) -> tuple:
        return letters(self.mu) + ("n",)

    @property
    def level(self) -> int:
        return max((k.level for k in self.values), default=0)

    def get(self, x: int, y: int, level: int = 0) -> Fraction:
        x, y = min(x, y), max(x, y)
        return self.values[BracketKey(x, y, level)]

    def __getitem__(self, text: str) -> Fraction:
        """Look up by notation, e.g. ``t["[bn,1]"]``."""
        body = text.strip("[]")
        pair, _, lvl = body.partition(",")
        names = self.names
        # split the pair into two known names
        for cut in range(1, len(pair)):
            left, right = pair[:cut], pair[cut:]
            if left in names and right in names:
                return self.get(names.index(left), names.index(right), int(lvl or 0))
        raise KeyError(text)

    def rendered(self) -> dict:
        return {k.render(self.names): v for k, v in sorted(self.values.items(),
                                                          key=lambda kv: (kv[0].level, kv[0].left, kv[0].right))}


def bracket_init(A, b) -> BracketTable:
    """Level-0 brackets [xy] = sum over observations of x_i * y_i, with n = -b."""
    A = np.asarray(A, dtype=object)
    b = np.asarray(b, dtype=object)
    if A.ndim != 2 or A.shape[0] != b.shape[0]:
        raise ShapeError("observation matrix and constants do not conform")
    arith = arith_for(A, b)
    cols = [list(c) for c in lift(A).T] + [[-v for v in lift(b)]]
    mu = A.shape[1]
    t = BracketTable(mu, spec=arith.spec, ops=arith.ops)
    for x in range(mu + 1):
        for y in range(x, mu + 1):
            t.values[BracketKey(x, y, 0)] = arith.dot(Fraction(0), zip(cols[x], cols[y]))
    return t


def bracket_from_normal(N, rhs, nn=0) -> BracketTable:
    """Level-0 brackets read from normal equations ``N u = rhs``.

    [xy] = N[x,y], [xn] = -rhs[x], [nn] = ``nn``.  For a case-2 problem
    ``nn = 0`` makes the reduced [nn,mu] equal to minus the squared norm of
    the minimum-norm solution.
    """
    spec = spec_of(N, rhs)
    N, rhs = lift(N), lift(rhs)
    mu = N.shape[0]
    t = BracketTable(mu, spec=spec)
    for x in range(mu):
        for y in range(x, mu):
            t.values[BracketKey(x, y, 0)] = N[x, y]
        t.values[BracketKey(x, mu, 0)] = -rhs[x]
    t.values[BracketKey(mu, mu, 0)] = Fraction(nn)
    return t


def bracket_reduce(t: BracketTable) -> BracketTable:
    """One more level: [xy,k+1] = [xy,k] - [kx,k][ky,k]/[kk,k]."""
    k = t.level
    if k >= t.mu:
        raise ValueError("table is fully reduced")
    arith = Arithmetic(t.spec, t.ops)
    pivot = t.get(k, k, k)
    if pivot == 0:
        raise SingularMatrixError(f"zero pivot bracket at level {k}", step=k)
    out = BracketTable(t.mu, dict(t.values), t.spec, t.ops)
    for x in range(k + 1, t.mu + 1):
        ratio = t.get(k, x, k) / pivot       # exact; the whole entry is rounded once
        for y in range(x, t.mu + 1):
            arith.ops.divs += 1
            out.values[BracketKey(x, y, k + 1)] = arith.dot(
                t.get(x, y, k), [(ratio, t.get(k, y, k))], subtract=True)
    return out


def bracket_reduce_all(t: BracketTable) -> BracketTable:
    while t.level < t.mu:
        t = bracket_reduce(t)
    return t


def gauss_reduce_solve(t: BracketTable) -> np.ndarray:
    """Solve the reduced equations A = 0, B = 0, ... in reverse order.

    The k-th equation reads [kn,k] + [kk,k] p_k + [k,k+1;k] p_{k+1} + ... = 0.
    """
    t = bracket_reduce_all(t)
    arith = Arithmetic(t.spec, t.ops)
    mu = t.mu
    p = [None] * mu
    for k in range(mu - 1, -1, -1):
        pivot = t.get(k, k, k)
        if pivot == 0:
            raise SingularMatrixError(f"zero pivot bracket at level {k}", step=k)
        pairs = [(t.get(k, j, k), p[j]) for j in range(k + 1, mu)]
        p[k] = arith.dot(-t.get(k, mu, k), pairs, subtract=True, divisor=pivot)
    return arith.wrap_array(np.array(p, dtype=object))


def reduced_forms(t: BracketTable, point) -> list:
    """Values of Gauss's linear forms A, B, C, ... at ``point`` (exact)."""
    t = bracket_reduce_all(t)
    point = lift(point)
    mu = t.mu
    return [t.get(k, mu, k) + sum((t.get(k, j, k) * point[j] for j in range(k, mu)), Fraction(0))
            for k in range(mu)]


def omega(A, b, point) -> Fraction:
    """Sum of squared residuals sum (n_i + A_i . point)^2 with n = -b."""
    r = lift(A).dot(lift(point)) - lift(b)
    return sum((v * v for v in r), Fraction(0))


def correlate_recover(problem: LsqProblem, u) -> np.ndarray:
    """x = A^t u, the minimum-norm solution from the normal-equation multipliers."""
    u = np.asarray(u, dtype=object)
    if u.shape != (problem.A.shape[0],):
        raise ShapeError(f"u has shape {u.shape}, expected ({problem.A.shape[0]},)")
    return mat_vec(transpose(problem.A), u)
