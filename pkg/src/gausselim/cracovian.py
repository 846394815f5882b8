"""Cracovians: arrays multiplied column by column.

The product ``A ∧ B`` dots column i of A with column j of B, so it equals
``A^t B`` in ordinary matrix algebra.  It is not associative.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .arithmetic import arith_for, lift
from .matrixcore import ShapeError

__all__ = ["Cracovian", "cracovian_product", "find_nonassociative", "NONASSOCIATIVE_WITNESS"]


@dataclass(frozen=True)
class Cracovian:
    """A matrix to be multiplied the Cracovian way (``a ^ b``)."""

    data: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.data, dtype=object)
        if d.ndim != 2:
            raise ShapeError("a Cracovian is two-dimensional")
        object.__setattr__(self, "data", d)

    @property
    def shape(self) -> tuple:
        return self.data.shape

    def __xor__(self, other: "Cracovian") -> "Cracovian":
        return Cracovian(cracovian_product(self.data, other.data))

    def __eq__(self, other):
        if not isinstance(other, Cracovian):
            return NotImplemented
        return self.shape == other.shape and bool(np.all(lift(self.data) == lift(other.data)))

    __hash__ = None


def cracovian_product(a, b) -> np.ndarray:
    """C[i, j] = sum_k a[k, i] * b[k, j]; one rounding per entry in fixed modes."""
    a = np.asarray(a.data if isinstance(a, Cracovian) else a, dtype=object)
    b = np.asarray(b.data if isinstance(b, Cracovian) else b, dtype=object)
    if a.ndim != 2 or b.ndim != 2 or a.shape[0] != b.shape[0]:
        raise ShapeError(f"Cracovian product needs equal row counts, got {a.shape} and {b.shape}")
    arith = arith_for(a, b)
    fa, fb = lift(a), lift(b)
    out = np.empty((a.shape[1], b.shape[1]), dtype=object)
    for i in range(a.shape[1]):
        for j in range(b.shape[1]):
            out[i, j] = arith.dot(Fraction(0), zip(fa[:, i], fb[:, j]))
    return arith.wrap_array(out)


def find_nonassociative(values=(0, 1), size: int = 2):
    """First (A, B, C) over the given entries with (A∧B)∧C != A∧(B∧C)."""
    mats = [np.array(v, dtype=object).reshape(size, size) for v in product(values, repeat=size * size)]
    for a, b, c in product(mats, repeat=3):
        left = cracovian_product(cracovian_product(a, b), c)
        right = cracovian_product(a, cracovian_product(b, c))
        if not np.array_equal(left, right):
            return a, b, c
    return None


# found by find_nonassociative(); (A∧B)∧C = B^t A C while A∧(B∧C) = A^t B^t C
NONASSOCIATIVE_WITNESS = (
    ((0, 0), (0, 1)),
    ((0, 0), (1, 0)),
    ((0, 0), (0, 1)),
)
