"""
Least squares with bracket symbols
==================================

Overdetermined observations (minimize the residual) and an underdetermined
system (minimize the norm), both through the same reduction.
"""
from fractions import Fraction

import numpy as np

from gausselim import (LsqProblem, bracket_from_normal, bracket_init, bracket_reduce_all, build_normal,
                       cholesky_squared, correlate_recover, doolittle_solve, gauss_reduce_solve, omega)


def frac(rows):
    return np.array([[Fraction(v) for v in r] for r in rows], dtype=object)


A = frac([[1, 0], [0, 1], [1, 1], [1, 2]])
b = np.array([Fraction(v) for v in [1, 2, 1, 3]], dtype=object)

# %%
# [aa], [ab], [an], ... then the reduced brackets [bb,1], [nn,2].
t = bracket_reduce_all(bracket_init(A, b))
for key, value in t.rendered().items():
    print(f"{key:7} {value}")
x = gauss_reduce_solve(bracket_init(A, b))
print("x =", [str(v) for v in x], "  residual sum of squares:", omega(A, b, x), "=", t["[nn,2]"])

# %%
# The same solution three ways: brackets, Doolittle's tables, square-root-free Cholesky.
p = LsqProblem("case1", A, b)
N, rhs = build_normal(p)
assert list(doolittle_solve(N, rhs)[0]) == list(x) == list(cholesky_squared(N, rhs).lam)

# %%
# Minimum norm: solve for correlates, then x = Aᵗ u.
p2 = LsqProblem("case2", frac([[1, 1, 1], [1, -1, 1]]), np.array([Fraction(1), Fraction(1, 3)], dtype=object))
u = gauss_reduce_solve(bracket_from_normal(*build_normal(p2)))
print("minimum-norm x =", [str(v) for v in correlate_recover(p2, u)])
