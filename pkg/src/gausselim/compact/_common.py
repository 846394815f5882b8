from __future__ import annotations

import numpy as np

from ..arithmetic import Arithmetic, lift, spec_of
from ..scalar import PrecisionSpec


class NotPositiveDefiniteError(ArithmeticError):
    """A pivot (or the quantity under a square root) was not positive."""


def working(spec: PrecisionSpec | None | str, *arrays) -> Arithmetic:
    """Arithmetic for the given spec, or the operands' own spec when
    ``spec`` is the string ``"inherit"``."""
    if spec == "inherit":
        return Arithmetic(spec_of(*arrays))
    return Arithmetic(spec)


def load(arith: Arithmetic, a) -> np.ndarray:
    """Operand values as Fractions, rounded to the working spec."""
    out = lift(a)
    if not arith.exact:
        for idx, v in np.ndenumerate(out):
            out[idx] = arith.round(v)
        arith.ops.rounds -= out.size      # loading data is not a computation
    return out


def var_names(n: int, names=None) -> tuple:
    if names:
        names = tuple(names)
        if len(names) != n:
            raise ValueError("one name per unknown")
        return names
    return tuple("wxyz"[:n]) if n <= 4 else tuple(f"x{i + 1}" for i in range(n))
