"""Elimination as it was done before matrices: the schoolbook form,
fraction-free (double-multiply) elimination, and Rolle's two-column method.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arithmetic import Arithmetic, arith_for, lift, spec_of
from .matrixcore import (
    ElementaryStep,
    ShapeError,
    SingularMatrixError,
    TraceLog,
    check_consistency,
    _choose_pivot,
    _pivot_threshold,
)

__all__ = [
    "LinearSystem",
    "RolleEquation",
    "RolleAssignment",
    "RolleTrace",
    "schoolbook_solve",
    "fraction_free_solve",
    "rolle_solve",
    "combine_rows",
    "proportional",
    "closed_form_diophantus",
    "closed_form_aryabhata",
    "format_equation",
    "format_assignment",
    "render_rolle",
]

DEFAULT_NAMES = "xyzvwuts"


@dataclass(frozen=True)
class LinearSystem:
    A: np.ndarray
    b: np.ndarray
    names: tuple = ()

    def __post_init__(self):
        A = np.asarray(self.A, dtype=object)
        b = np.asarray(self.b, dtype=object)
        if A.ndim != 2 or b.ndim != 1 or A.shape[0] != b.shape[0]:
            raise ShapeError(f"system shapes {A.shape} and {b.shape} do not conform")
        names = tuple(self.names) or default_names(A.shape[1])
        if len(names) != A.shape[1] or len(set(names)) != len(names):
            raise ValueError("need one distinct name per unknown")
        spec_of(A, b)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "names", names)

    @classmethod
    def from_augmented(cls, rows, names=()) -> "LinearSystem":
        aug = np.asarray(rows, dtype=object)
        return cls(aug[:, :-1], aug[:, -1], names)

    @property
    def n(self) -> int:
        return self.A.shape[1]

    @property
    def augmented(self) -> np.ndarray:
        return np.column_stack([self.A, self.b])

    def require_square(self):
        if self.A.shape[0] != self.A.shape[1]:
            raise ShapeError(f"expected a square system, got {self.A.shape}")


def default_names(n: int) -> tuple:
    if n <= len(DEFAULT_NAMES):
        return tuple(DEFAULT_NAMES[:n])
    return tuple(f"x{i + 1}" for i in range(n))


def _as_system(sys_or_a, b=None) -> LinearSystem:
    if isinstance(sys_or_a, LinearSystem):
        return sys_or_a
    return LinearSystem(sys_or_a, b)


def _back_substitute(arith: Arithmetic, aug: np.ndarray) -> np.ndarray:
    n = aug.shape[0]
    x = np.empty(n, dtype=object)
    for i in range(n - 1, -1, -1):
        pairs = [(aug[i, k], x[k]) for k in range(i + 1, n) if aug[i, k] != 0]
        x[i] = arith.dot(aug[i, n], pairs, subtract=True, divisor=aug[i, i])
    return x


def _fail(system: LinearSystem, step: int, pivoting: bool):
    check_consistency(system.A, system.b)
    hint = "" if pivoting else "; try pivoting"
    raise SingularMatrixError(f"zero pivot at elimination step {step + 1}{hint}", step=step)


def schoolbook_solve(system, b=None, pivoting: bool = False):
    """Canonical elimination: keep the leading equation, subtract multiples
    of it from each equation below, recurse, then back-substitute.

    Returns ``(x, trace)``.  The trace holds every successive equivalent
    system (augmented matrix) and the row operations used.
    """
    system = _as_system(system, b)
    system.require_square()
    arith = arith_for(system.A, system.b)
    aug = lift(system.augmented)
    n = system.n
    trace = TraceLog(ops=arith.ops)
    trace.snapshot("system 1", arith.wrap_array(aug))
    threshold = _pivot_threshold(arith, aug[:, :n])
    for i in range(n - 1 if n else 0):
        p = _choose_pivot(aug[:, :n], i, pivoting, threshold)
        if p is None:
            _fail(system, i, pivoting)
        if p != i:
            aug[[i, p]] = aug[[p, i]]
            trace.steps.append(ElementaryStep.swap(i, p))
        changed = False
        for j in range(i + 1, n):
            if aug[j, i] == 0:
                continue
            m = arith.div(aug[j, i], aug[i, i])
            trace.steps.append(ElementaryStep.subtract(j, i, m))
            for k in range(i + 1, n + 1):
                aug[j, k] = arith.dot(aug[j, k], [(m, aug[i, k])], subtract=True)
            aug[j, i] = Fraction(0)
            changed = True
        if changed or p != i:
            trace.snapshot(f"system {len(trace.snapshots) + 1}", arith.wrap_array(aug))
    if n and _choose_pivot(aug[:, :n], n - 1, False, threshold) is None:
        _fail(system, n - 1, pivoting)
    x = _back_substitute(arith, aug)
    return arith.wrap_array(x), trace


def fraction_free_solve(system, b=None):
    """Double-multiply elimination: row_j := a_ii * row_j - a_ji * row_i.

    No common factors are divided out, so integer input keeps integer
    intermediates (they grow).  Rows are swapped only when a leading entry
    is zero.  Returns ``(x, trace)``; the trace snapshots each reduced system.
    """
    system = _as_system(system, b)
    system.require_square()
    arith = arith_for(system.A, system.b)
    aug = lift(system.augmented)
    n = system.n
    trace = TraceLog(ops=arith.ops)
    trace.snapshot("system 1", aug)
    for i in range(n):
        if aug[i, i] == 0:
            p = next((j for j in range(i + 1, n) if aug[j, i] != 0), None)
            if p is None:
                check_consistency(system.A, system.b)
                raise SingularMatrixError(f"zero leading entry at step {i + 1}", step=i)
            aug[[i, p]] = aug[[p, i]]
            trace.steps.append(ElementaryStep.swap(i, p))
        lead = aug[i, i]
        changed = False
        for j in range(i + 1, n):
            other = aug[j, i]
            if other == 0:
                continue
            # scale then subtract; recorded as two elementary steps
            trace.steps.append(ElementaryStep.scale(j, lead))
            trace.steps.append(ElementaryStep.subtract(j, i, other))
            for k in range(i, n + 1):
                arith.ops.muls += 2
                arith.ops.subs += 1
                aug[j, k] = arith.round(lead * aug[j, k] - other * aug[i, k])
            changed = True
        if changed:
            trace.snapshot(f"system {len(trace.snapshots) + 1}", aug)
    x = _back_substitute(arith, aug)
    return arith.wrap_array(x), trace


def combine_rows(system, recipe) -> list:
    """Replay a hand-chosen sequence of row combinations, exactly.

    ``recipe`` is a list of ``{row_number: coefficient}`` maps; row numbers
    start at 1 for the given equations and each new row takes the next
    number.  Returns ``[(number, row, combination), ...]`` for all rows.
    """
    system = _as_system(system)
    aug = lift(system.augmented)
    rows = [(i + 1, tuple(aug[i]), {}) for i in range(aug.shape[0])]
    for combo in recipe:
        width = aug.shape[1]
        acc = [Fraction(0)] * width
        for number, coef in combo.items():
            if not 1 <= number <= len(rows):
                raise ValueError(f"row {number} does not exist yet")
            src = rows[number - 1][1]
            acc = [a + Fraction(coef) * v for a, v in zip(acc, src)]
        rows.append((len(rows) + 1, tuple(acc), dict(combo)))
    return rows


def proportional(row, target) -> bool:
    """True when ``row`` is a nonzero multiple of ``target``."""
    row, target = [Fraction(v) for v in row], [Fraction(v) for v in target]
    if len(row) != len(target) or not any(target):
        return False
    k = next(r / t for r, t in zip(row, target) if t != 0)
    return k != 0 and all(r == k * t for r, t in zip(row, target))


# --- Rolle ------------------------------------------------------------------

@dataclass(frozen=True)
class RolleEquation:
    number: int
    coeffs: tuple          # in declared variable order
    rhs: Fraction
    note: str = ""


@dataclass(frozen=True)
class RolleAssignment:
    number: int
    var: str
    constant: Fraction
    terms: tuple           # ((name, coefficient), ...) of still-unknown variables
    note: str = ""


@dataclass
class RolleTrace:
    names: tuple
    order: tuple
    direction: list = field(default_factory=list)   # classes of RolleEquation
    ret: list = field(default_factory=list)         # classes of RolleAssignment

    @property
    def last_direction(self) -> RolleEquation:
        return self.direction[-1][-1]


def format_equation(coeffs, rhs, names, order=None) -> str:
    """``v − z = 1`` style text; terms listed in ``order`` (names)."""
    order = order or names
    idx = {n: i for i, n in enumerate(names)}
    parts = []
    for name in order:
        c = Fraction(coeffs[idx[name]])
        if c == 0:
            continue
        mag = abs(c)
        term = ("" if mag == 1 else _num(mag)) + name
        if not parts:
            parts.append(("−" if c < 0 else "") + term)
        else:
            parts.append(("− " if c < 0 else "+ ") + term)
    return f"{' '.join(parts) or '0'} = {_num(rhs)}"


def _num(v) -> str:
    v = Fraction(v)
    return str(v).replace("-", "−")


def format_assignment(a: RolleAssignment) -> str:
    parts = []
    if a.constant != 0 or not a.terms:
        parts.append(_num(a.constant))
    for name, c in a.terms:
        mag = abs(c)
        term = ("" if mag == 1 else _num(mag)) + name
        if not parts:
            parts.append(("−" if c < 0 else "") + term)
        else:
            parts.append(("− " if c < 0 else "+ ") + term)
    return f"{a.var} = {' '.join(parts)}"


def rolle_solve(system, b=None, order=None):
    """Rolle's method: a direction column of ever smaller classes and a
    return column of back substitutions.

    ``order`` lists the unknowns in the order they are removed (Rolle chose
    his own order; the default is the declared order).  Equations are never
    reordered: a zero leading coefficient stops the method.
    Returns ``(x, trace)`` with x in declared variable order.
    """
    system = _as_system(system, b)
    system.require_square()
    arith = arith_for(system.A, system.b)
    names = system.names
    n = system.n
    order = tuple(order) if order else names
    if sorted(order) != sorted(names):
        raise ValueError("order must be a permutation of the variable names")
    col = {name: i for i, name in enumerate(names)}
    trace = RolleTrace(names, order)

    A, bb = lift(system.A), lift(system.b)
    number = 0
    current = []
    for i in range(n):
        number += 1
        current.append(RolleEquation(number, tuple(A[i]), bb[i]))
    trace.direction.append(current)

    explicit = []   # (var, constant, coefficient dict, source equation number)
    for stage, var in enumerate(order):
        head = current[0]
        c = col[var]
        lead = head.coeffs[c]
        if lead == 0:
            check_consistency(system.A, system.b)
            raise SingularMatrixError(
                f"zero coefficient of {var} in equation {head.number}; Rolle's order admits no swap",
                step=stage)
        later = [v for v in order[stage + 1:]]
        const = arith.div(head.rhs, lead)
        terms = {v: arith.div(-head.coeffs[col[v]], lead) for v in later if head.coeffs[col[v]] != 0}
        explicit.append((var, const, terms, head.number))
        if stage == n - 1:
            break
        nxt = []
        for eq in current[1:]:
            number += 1
            m = eq.coeffs[c]
            if m == 0:
                coeffs, rhs = eq.coeffs, eq.rhs
            else:
                ratio = arith.div(m, lead)
                coeffs = tuple(Fraction(0) if k == c else arith.dot(eq.coeffs[k], [(ratio, head.coeffs[k])],
                                                                      subtract=True)
                               for k in range(n))
                rhs = arith.dot(eq.rhs, [(ratio, head.rhs)], subtract=True)
            nxt.append(RolleEquation(number, coeffs, rhs, f"{var} from {head.number} sub. into {eq.number}"))
        current = nxt
        trace.direction.append(current)

    # return column: explicit functions in reverse order, then successive substitution
    number = 0
    cls = []
    for var, const, terms, src in reversed(explicit):
        number += 1
        cls.append(RolleAssignment(number, var, const, tuple(terms.items()),
                                   f"{var} from left column {src}"))
    trace.ret.append(cls)
    values = {}
    while cls:
        first = cls[0]
        if first.terms:
            raise AssertionError("first assignment of a class must be a number")
        values[first.var] = first.constant
        nxt = []
        for a in cls[1:]:
            number += 1
            hit = dict(a.terms)
            if first.var in hit:
                coef = hit.pop(first.var)
                const = arith.dot(a.constant, [(coef, first.constant)])
            else:
                const = a.constant
            nxt.append(RolleAssignment(number, a.var, const, tuple(hit.items()),
                                       f"{first.var} from {first.number} sub. into {a.number}"))
        cls = nxt
        if cls:
            trace.ret.append(cls)
    x = np.array([values[name] for name in names], dtype=object)
    return arith.wrap_array(x), trace


def render_rolle(trace: RolleTrace) -> str:
    """Two-column text: direction column, then return column."""
    ordinals = ["Premiere", "Seconde", "Troisiéme", "Quartriéme"]

    def heading(k):
        return f"{ordinals[k]} Classe" if k < len(ordinals) else f"Class {k + 1}"

    out = ["Columne de direction"]
    for k, cls in enumerate(trace.direction):
        out.append(f"  {heading(k)}")
        for eq in cls:
            arrow = f"{eq.note} ⇒ " if eq.note else ""
            out.append(f"    {arrow}{eq.number}) {format_equation(eq.coeffs, eq.rhs, trace.names, trace.order)}")
    out.append("Columne de retour")
    for k, cls in enumerate(trace.ret):
        out.append(f"  {heading(k)}")
        for a in cls:
            out.append(f"    {format_assignment(a)} ({a.number} ⇐ {a.note}")
    return "\n".join(out) + "\n"


# --- closed forms -------------------------------------------------------------

def closed_form_diophantus(e) -> np.ndarray:
    """Four numbers whose any-three sum exceeds the fourth by e_i:
    n_i = (e1 + e2 + e3 + e4)/4 - e_i/2."""
    e = lift(e)
    if e.shape != (4,):
        raise ValueError("Diophantus' problem has exactly four excesses")
    h = sum(e, Fraction(0)) / 4
    return np.array([h - v / 2 for v in e], dtype=object)


def closed_form_aryabhata(d) -> np.ndarray:
    """Numbers whose total minus each is d_i: n_i = sum(d)/(n - 1) - d_i."""
    d = lift(d)
    n = d.shape[0]
    if n < 2:
        raise ValueError("need at least two numbers")
    total = sum(d, Fraction(0)) / (n - 1)
    return np.array([total - v for v in d], dtype=object)
