"""
Desk-calculator arithmetic: the single-division tableau
=======================================================

Four fractional digits, accumulated products rounded once, and a table that
can be replayed line by line.
"""
from fractions import Fraction

import numpy as np

from gausselim import (PrecisionSpec, as_matrix, as_vector, crout_solve, doolittle_refine, doolittle_solve,
                       dwyer_single_division, ldu_solve, lift, render_text, replay_tableau)

spec = PrecisionSpec.parse("frac=4")
A = [["1", ".4", ".5", ".6"], [".4", "1", ".3", ".4"], [".5", ".3", "1", ".2"], [".6", ".4", ".2", "1"]]
b = [".2", ".4", ".6", ".8"]

# %%
# Seventeen numbered rows; each records the rows it was computed from.
x, tab = dwyer_single_division(as_matrix(A, spec), as_vector(b, spec))
print(render_text(tab))
assert replay_tableau(tab) == []          # no row disagrees with its recipe

# %%
# Crout's auxiliary matrix reaches the same answer up to the last digit.
x_c, _, ops = crout_solve(as_matrix(A, spec), as_vector(b, spec))
print("crout:", [c.styled() for c in x_c], ops.as_dict())

# %%
# Solve at three significant digits, then refine against the exact matrix.
sig3 = PrecisionSpec.parse("sig=3")
x3, _ = doolittle_solve(as_matrix(A, sig3), as_vector(b, sig3))
exact_A = lift(as_matrix(A, spec))
absolute = np.array([-v for v in lift(as_vector(b, spec))], dtype=object)
report = doolittle_refine(exact_A, absolute, lift(x3), spec=sig3)
print("residual norms:", [float(r) for r in report.residual_norms()])

# %%
# Counting operations on a dense 18 x 18 Hilbert matrix.
n = 18
H = np.array([[Fraction(1, i + j + 1) for j in range(n)] for i in range(n)], dtype=object)
_, _, trace = ldu_solve(H, np.array([Fraction(1)] * n, dtype=object))
print(trace.ops.as_dict(), "vs 2n^3/3 =", 2 * n ** 3 // 3)
