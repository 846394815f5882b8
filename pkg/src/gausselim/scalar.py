"""Exact rationals and emulated fixed-precision decimal arithmetic.

Every computation in the package runs on :class:`fractions.Fraction`
values.  Fixed-precision work is modelled by rounding those fractions to a
:class:`PrecisionSpec` (round-half-to-even) at the points where a desk
calculator operator would have copied a number down.  :class:`FixedDec` is
the decimal value that results, and :class:`Accumulator` models a machine
register that sums products exactly and is rounded once when read out.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

__all__ = [
    "PrecisionSpec",
    "FixedDec",
    "Accumulator",
    "MixedPrecisionError",
    "round_fraction",
    "round_to",
    "sqrt_round",
    "accumulate_dot",
    "parse_scalar",
    "to_fraction",
]

FRACTIONAL = "frac"
SIGNIFICANT = "sig"


class MixedPrecisionError(TypeError):
    """Operands carry different precision specs (or different scalar kinds)."""


@dataclass(frozen=True)
class PrecisionSpec:
    """How many decimal digits survive a rounding.

    ``mode`` is ``"frac"`` (digits after the decimal point, as in a table
    printed to four places) or ``"sig"`` (significant digits, as with a
    three-figure multiplication table).
    """

    mode: str
    digits: int

    def __post_init__(self):
        if self.mode not in (FRACTIONAL, SIGNIFICANT):
            raise ValueError(f"unknown precision mode {self.mode!r}")
        if not isinstance(self.digits, int) or self.digits < 1:
            raise ValueError(f"digits must be a positive integer, got {self.digits!r}")

    @classmethod
    def parse(cls, text: str) -> "PrecisionSpec":
        """Parse ``frac=K`` or ``sig=K``."""
        mode, sep, digits = text.partition("=")
        if not sep or mode not in (FRACTIONAL, SIGNIFICANT):
            raise ValueError(f"bad precision spec {text!r}; expected frac=K or sig=K")
        try:
            k = int(digits)
        except ValueError:
            raise ValueError(f"bad precision spec {text!r}; digits must be an integer") from None
        return cls(mode, k)

    def __str__(self):
        return f"{self.mode}={self.digits}"

    def ulp(self, x: Fraction = Fraction(1)) -> Fraction:
        """One unit in the last place at the magnitude of ``x``."""
        if self.mode == FRACTIONAL:
            return Fraction(1, 10**self.digits)
        e = _decade(abs(x)) if x else 1
        return Fraction(10) ** (e - self.digits)


def _decade(x: Fraction) -> int:
    """Smallest e with x < 10**e, for x > 0."""
    e = len(str(x.numerator)) - len(str(x.denominator))
    # correct the estimate by at most one step either way
    while x >= Fraction(10) ** e:
        e += 1
    while x < Fraction(10) ** (e - 1):
        e -= 1
    return e


def _exponent_for(x: Fraction, spec: PrecisionSpec) -> int:
    """Decimal exponent of the last kept digit when rounding ``x``."""
    if spec.mode == FRACTIONAL:
        return -spec.digits
    if x == 0:
        return -spec.digits
    return _decade(abs(x)) - spec.digits


def _round_units(x: Fraction, exp: int) -> int:
    # Fraction.__round__ without ndigits is round-half-even
    return round(x / Fraction(10) ** exp)


def round_fraction(x, spec: PrecisionSpec | None) -> Fraction:
    """Round ``x`` to ``spec`` and return the result as an exact Fraction.

    ``spec=None`` means exact arithmetic and returns ``x`` unchanged.
    """
    x = to_fraction(x)
    if spec is None:
        return x
    exp = _exponent_for(x, spec)
    units = _round_units(x, exp)
    if spec.mode == SIGNIFICANT and units and abs(units) >= 10**spec.digits:
        # rounding carried into a new decade (9.996 -> 10.0)
        exp += 1
        units = _round_units(x, exp)
    return Fraction(units) * Fraction(10) ** exp


def round_to(x, spec: PrecisionSpec) -> "FixedDec":
    """Nearest value representable under ``spec``; ties go to the even digit."""
    return FixedDec._from_fraction(round_fraction(x, spec), spec)


def sqrt_round(x, spec: PrecisionSpec) -> Fraction:
    """Correctly rounded square root of a non-negative rational."""
    x = to_fraction(x)
    if x < 0:
        raise ValueError("square root of a negative number")
    if x == 0:
        return Fraction(0)
    # a first guess fixes the exponent, then integer square roots do the work
    approx = Fraction(math.isqrt(x.numerator * 10**40 // x.denominator), 10**20)
    if spec.mode == FRACTIONAL:
        exp = -spec.digits
    else:
        exp = _decade(approx) - spec.digits if approx else -spec.digits - 20

    def units_at(e):
        scaled = x / Fraction(10) ** (2 * e)   # want round(sqrt(scaled))
        s = math.isqrt(scaled.numerator // scaled.denominator)
        # compare (s + 1/2)^2 with scaled exactly
        mid = Fraction(2 * s + 1, 2) ** 2
        if scaled > mid or (scaled == mid and s % 2 == 1):
            s += 1
        return s

    units = units_at(exp)
    if spec.mode == SIGNIFICANT:
        while units >= 10**spec.digits:
            exp += 1
            units = units_at(exp)
        while 0 < units < 10 ** (spec.digits - 1):
            exp -= 1
            units = units_at(exp)
    return Fraction(units) * Fraction(10) ** exp


def exact_sqrt(x) -> Fraction | None:
    """Square root of a rational if it is rational, else ``None``."""
    x = to_fraction(x)
    if x < 0:
        return None
    p, q = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if p * p == x.numerator and q * q == x.denominator:
        return Fraction(p, q)
    return None


@dataclass(frozen=True)
class FixedDec:
    """A decimal number ``units * 10**exp`` that is exactly representable
    under ``spec``.

    Arithmetic between two FixedDec values computes the exact result and
    rounds it once.  Mixing specs, or mixing with a Fraction, raises
    :class:`MixedPrecisionError`; plain ints are promoted.
    """

    units: int
    exp: int
    spec: PrecisionSpec

    @classmethod
    def _from_fraction(cls, x: Fraction, spec: PrecisionSpec) -> "FixedDec":
        exp = _exponent_for(x, spec)
        if spec.mode == SIGNIFICANT and x and abs(_round_units(x, exp)) >= 10**spec.digits:
            exp += 1
        scaled = x / Fraction(10) ** exp
        if scaled.denominator != 1:
            raise ValueError(f"{x} is not representable under {spec}")
        return cls(int(scaled), exp, spec)

    @classmethod
    def parse(cls, text: str, spec: PrecisionSpec) -> "FixedDec":
        """Read a decimal literal; it must already be representable."""
        value = parse_scalar(text)
        fixed = round_to(value, spec)
        if fixed.to_fraction() != value:
            raise ValueError(f"{text!r} has more digits than {spec} allows")
        return fixed

    def to_fraction(self) -> Fraction:
        return Fraction(self.units) * Fraction(10) ** self.exp

    # -- arithmetic -------------------------------------------------------

    def _other(self, other) -> Fraction:
        if isinstance(other, FixedDec):
            if other.spec != self.spec:
                raise MixedPrecisionError(f"cannot combine {self.spec} with {other.spec}")
            return other.to_fraction()
        if isinstance(other, int):
            return Fraction(other)
        raise MixedPrecisionError(f"cannot combine FixedDec with {type(other).__name__}")

    def _wrap(self, x: Fraction) -> "FixedDec":
        return round_to(x, self.spec)

    def __add__(self, other):
        return self._wrap(self.to_fraction() + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self.to_fraction() - self._other(other))

    def __rsub__(self, other):
        return self._wrap(self._other(other) - self.to_fraction())

    def __mul__(self, other):
        return self._wrap(self.to_fraction() * self._other(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        d = self._other(other)
        if d == 0:
            raise ZeroDivisionError("FixedDec division by zero")
        return self._wrap(self.to_fraction() / d)

    def __rtruediv__(self, other):
        if self.units == 0:
            raise ZeroDivisionError("FixedDec division by zero")
        return self._wrap(self._other(other) / self.to_fraction())

    def __neg__(self):
        return FixedDec(-self.units, self.exp, self.spec)

    def __abs__(self):
        return FixedDec(abs(self.units), self.exp, self.spec)

    def __bool__(self):
        return self.units != 0

    def __float__(self):
        return float(self.to_fraction())

    def _cmp_value(self, other):
        if isinstance(other, FixedDec):
            return self._other(other)
        if isinstance(other, (int, Fraction)):
            return Fraction(other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, FixedDec):
            return self.spec == other.spec and self.to_fraction() == other.to_fraction()
        if isinstance(other, int):
            return self.to_fraction() == other
        return NotImplemented

    def __hash__(self):
        return hash((self.to_fraction(), self.spec))

    def __lt__(self, other):
        o = self._cmp_value(other)
        return NotImplemented if o is NotImplemented else self.to_fraction() < o

    def __le__(self, other):
        o = self._cmp_value(other)
        return NotImplemented if o is NotImplemented else self.to_fraction() <= o

    def __gt__(self, other):
        o = self._cmp_value(other)
        return NotImplemented if o is NotImplemented else self.to_fraction() > o

    def __ge__(self, other):
        o = self._cmp_value(other)
        return NotImplemented if o is NotImplemented else self.to_fraction() >= o

    # -- text ---------------------------------------------------------------

    def plain(self) -> str:
        """Ordinary decimal string, e.g. ``-0.1190``."""
        sign = "-" if self.units < 0 else ""
        digits = str(abs(self.units))
        if self.exp >= 0:
            return sign + digits + "0" * self.exp
        k = -self.exp
        digits = digits.rjust(k + 1, "0")
        return f"{sign}{digits[:-k]}.{digits[-k:]}"

    def styled(self) -> str:
        """Leading-dot style of printed tables: ``.7381``, ``-.1190``."""
        text = self.plain()
        if text.startswith("0."):
            return text[1:]
        if text.startswith("-0."):
            return "-" + text[2:]
        return text

    def __str__(self):
        return self.plain()

    def __repr__(self):
        return f"FixedDec({self.plain()!r}, {self.spec})"


@dataclass
class Accumulator:
    """A calculating-machine register: products are added exactly and the
    contents are rounded once, on extraction."""

    spec: PrecisionSpec | None
    total: Fraction = field(default_factory=Fraction)

    def add(self, x) -> None:
        self.total += to_fraction(x)

    def add_product(self, a, b) -> None:
        self.total += to_fraction(a) * to_fraction(b)

    def sub_product(self, a, b) -> None:
        self.total -= to_fraction(a) * to_fraction(b)

    def extract(self) -> Fraction:
        return round_fraction(self.total, self.spec)


def _common_spec(values: Iterable) -> PrecisionSpec | None:
    spec = None
    for v in values:
        if isinstance(v, FixedDec):
            if spec is None:
                spec = v.spec
            elif v.spec != spec:
                raise MixedPrecisionError(f"operands mix {spec} and {v.spec}")
    return spec


def accumulate_dot(pairs: Sequence[tuple], seed) -> FixedDec:
    """``seed + sum(a*b)`` formed exactly, then rounded once.

    All operands must be FixedDec values sharing one spec.
    """
    flat = [seed] + [v for pair in pairs for v in pair]
    if not all(isinstance(v, FixedDec) for v in flat):
        raise MixedPrecisionError("accumulate_dot needs FixedDec operands throughout")
    spec = _common_spec(flat)
    acc = Accumulator(spec)
    acc.add(seed)
    for a, b in pairs:
        acc.add_product(a, b)
    return FixedDec._from_fraction(acc.extract(), spec)


def to_fraction(x) -> Fraction:
    """Exact rational value of an int, Fraction, FixedDec or decimal string."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, FixedDec):
        return x.to_fraction()
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"no exact rational value for {type(x).__name__}")


def parse_scalar(text: str) -> Fraction:
    """Parse ``p/q``, an integer, or a decimal literal such as ``-.1190``."""
    t = text.strip().replace("−", "-")
    if not t:
        raise ValueError("empty scalar literal")
    try:
        if "/" in t:
            num, den = t.split("/")
            if not num.strip() or not den.strip():
                raise ValueError
            return Fraction(int(num), int(den))
        return Fraction(t)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"bad scalar literal {text!r}") from None
