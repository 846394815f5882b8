"""Counted arithmetic under one rounding regime, and matrix carriers.

Matrices are numpy object arrays whose entries are all :class:`Fraction`
(exact mode) or all :class:`FixedDec` with a single spec (fixed mode).
Algorithms lift entries to Fractions, compute through an
:class:`Arithmetic` instance that rounds and counts, and wrap results back
into the caller's scalar kind.
"""
from __future__ import annotations

from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Iterable

import numpy as np

from .scalar import (
    FixedDec,
    MixedPrecisionError,
    PrecisionSpec,
    exact_sqrt,
    round_fraction,
    round_to,
    sqrt_round,
    to_fraction,
)

__all__ = [
    "OpCounter",
    "Arithmetic",
    "IrrationalRootError",
    "arith_for",
    "as_matrix",
    "as_vector",
    "lift",
    "wrap",
    "spec_of",
]


class IrrationalRootError(ArithmeticError):
    """An exact square root was requested of a non-square rational."""


@dataclass
class OpCounter:
    """Tally of arithmetic operations; ``rounds`` counts roundings to a
    spec (zero in exact mode)."""

    adds: int = 0
    subs: int = 0
    muls: int = 0
    divs: int = 0
    sqrts: int = 0
    rounds: int = 0

    @property
    def total(self) -> int:
        return self.adds + self.subs + self.muls + self.divs + self.sqrts

    def __add__(self, other: "OpCounter") -> "OpCounter":
        return OpCounter(*(getattr(self, f.name) + getattr(other, f.name) for f in fields(self)))

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)} | {"total": self.total}


class Arithmetic:
    """Arithmetic on Fractions, rounded to ``spec`` (None = exact) and counted.

    Each elementary operation rounds its result once.  :meth:`dot` models a
    machine accumulation: any number of products summed exactly, one
    rounding at the end.
    """

    def __init__(self, spec: PrecisionSpec | None = None, counter: OpCounter | None = None):
        self.spec = spec
        self.ops = counter if counter is not None else OpCounter()

    @property
    def exact(self) -> bool:
        return self.spec is None

    def fresh(self) -> "Arithmetic":
        return Arithmetic(self.spec)

    def round(self, x: Fraction) -> Fraction:
        if self.spec is None:
            return x
        self.ops.rounds += 1
        return round_fraction(x, self.spec)

    def add(self, a: Fraction, b: Fraction) -> Fraction:
        self.ops.adds += 1
        return self.round(a + b)

    def sub(self, a: Fraction, b: Fraction) -> Fraction:
        self.ops.subs += 1
        return self.round(a - b)

    def mul(self, a: Fraction, b: Fraction) -> Fraction:
        self.ops.muls += 1
        return self.round(a * b)

    def div(self, a: Fraction, b: Fraction) -> Fraction:
        if b == 0:
            raise ZeroDivisionError("division by zero")
        self.ops.divs += 1
        return self.round(a / b)

    def dot(self, seed: Fraction, pairs: Iterable[tuple], subtract: bool = False,
            divisor: Fraction | None = None) -> Fraction:
        """``(seed +/- sum(a*b)) / divisor`` accumulated exactly, rounded once."""
        total = seed
        for a, b in pairs:
            self.ops.muls += 1
            if subtract:
                self.ops.subs += 1
                total -= a * b
            else:
                self.ops.adds += 1
                total += a * b
        if divisor is not None:
            if divisor == 0:
                raise ZeroDivisionError("division by zero")
            self.ops.divs += 1
            total /= divisor
        return self.round(total)

    def sqrt(self, x: Fraction) -> Fraction:
        if x < 0:
            raise ValueError("square root of a negative number")
        self.ops.sqrts += 1
        if self.spec is None:
            root = exact_sqrt(x)
            if root is None:
                raise IrrationalRootError(
                    f"sqrt({x}) is irrational; use the squared-form route for exact work")
            return root
        self.ops.rounds += 1
        return sqrt_round(x, self.spec)

    def wrap(self, x: Fraction):
        """Caller-facing scalar: Fraction in exact mode, FixedDec otherwise."""
        if self.spec is None:
            return x
        return round_to(x, self.spec)

    def wrap_array(self, a: np.ndarray) -> np.ndarray:
        out = np.empty(a.shape, dtype=object)
        for idx, v in np.ndenumerate(a):
            out[idx] = self.wrap(v)
        return out

    def unit(self) -> Fraction:
        """Smallest nonzero magnitude this arithmetic can hold (for pivot tests)."""
        if self.spec is None:
            return Fraction(0)
        return self.spec.ulp()


def spec_of(*arrays) -> PrecisionSpec | None:
    """Common PrecisionSpec of the operands, or None if all exact.

    Raises MixedPrecisionError when Fractions and FixedDec values (or two
    different specs) are mixed.
    """
    kind = None   # "exact" or a PrecisionSpec
    for arr in arrays:
        if arr is None:
            continue
        for v in np.asarray(arr, dtype=object).ravel():
            k = v.spec if isinstance(v, FixedDec) else "exact"
            if kind is None:
                kind = k
            elif kind != k:
                raise MixedPrecisionError(f"scalar kinds mixed: {kind} and {k}")
    return None if kind in (None, "exact") else kind


def arith_for(*arrays) -> Arithmetic:
    return Arithmetic(spec_of(*arrays))


def lift(a) -> np.ndarray:
    """Object array of Fractions with the values of ``a``."""
    arr = np.asarray(a, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = to_fraction(v)
    return out


def wrap(a, spec: PrecisionSpec | None) -> np.ndarray:
    return Arithmetic(spec).wrap_array(lift(a))


def as_matrix(rows, spec: PrecisionSpec | None = None) -> np.ndarray:
    """Build a matrix from nested sequences of ints, Fractions, or literals.

    With ``spec`` the entries become FixedDec values; they must already be
    representable (rounding input data silently is never wanted).
    """
    arr = lift(rows)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {arr.shape}")
    return _apply_spec(arr, spec)


def as_vector(values, spec: PrecisionSpec | None = None) -> np.ndarray:
    arr = lift(values)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {arr.shape}")
    return _apply_spec(arr, spec)


def _apply_spec(arr: np.ndarray, spec: PrecisionSpec | None) -> np.ndarray:
    if spec is None:
        return arr
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        fixed = round_to(v, spec)
        if fixed.to_fraction() != v:
            raise ValueError(f"entry {v} is not representable under {spec}")
        out[idx] = fixed
    return out
