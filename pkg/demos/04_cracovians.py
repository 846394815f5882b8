"""
Cracovians: column-by-column products
=====================================
"""
import numpy as np

from gausselim import Cracovian, cracovian_product
from gausselim.cracovian import NONASSOCIATIVE_WITNESS

a = np.array([[1, 2], [3, 4]], dtype=object)
b = np.array([[5, 6], [7, 8]], dtype=object)

# columns of a against columns of b: the same as a.T @ b
print(cracovian_product(a, b))
assert (cracovian_product(a, b) == a.T @ b).all()

# %%
# Unlike matrices, the product is not associative.
A, B, C = (Cracovian(np.array(w, dtype=object)) for w in NONASSOCIATIVE_WITNESS)
print((A ^ B) ^ C)
print(A ^ (B ^ C))
