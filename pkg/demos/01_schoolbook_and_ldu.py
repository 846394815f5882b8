"""
Schoolbook elimination and its LDU bookkeeping
==============================================

One small system, solved the way it is taught, then the same steps read
back as a factorization.
"""
from fractions import Fraction

import numpy as np

from gausselim import LinearSystem, fraction_free_solve, ldu_decompose, rolle_solve, schoolbook_solve

A = np.array([[Fraction(v) for v in r] for r in [[1, 2, 1], [1, 1, 2], [2, 1, 1]]], dtype=object)
b = np.array([Fraction(v) for v in [3, 9, 16]], dtype=object)
system = LinearSystem(A, b, ("x", "y", "z"))

# %%
# Each elimination step produces an equivalent system; the trace keeps them all.
x, trace = schoolbook_solve(system)
for label, m in trace.snapshots:
    print(label)
    print(m)
print("x =", [str(v) for v in x])

# %%
# The multipliers used above are exactly the entries of L, and the final
# upper-triangular system is DU.
fact, _ = ldu_decompose(A)
print("L =\n", fact.L)
print("DU =\n", fact.DU)
assert (fact.reconstruct() == A).all()

# %%
# Cross-multiplying instead of dividing keeps every intermediate an integer.
_, ff = fraction_free_solve(system)
print(ff.snapshots[-1][1])

# %%
# Rolle's variant writes each unknown in terms of the rest before substituting.
x_r, _ = rolle_solve(system)
assert list(x_r) == list(x)
