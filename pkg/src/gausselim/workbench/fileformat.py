"""The plain-text problem format.

::

    # comments start with '#'; '#!' lines are directives
    #! vars x y z
    exact 3 4
    1 2 1 3
    1 1 2 9
    2 1 1 16

Header: ``exact <rows> <cols>`` or ``fixed frac=K|sig=K <rows> <cols>``;
the last column holds the right-hand sides.  A square coefficient block
gives a :class:`LinearSystem`; anything else a least-squares problem
(``#! case 1`` or ``#! case 2`` overrides the inference).  In fixed mode
every token must be representable at the declared precision.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from ..eliminate import LinearSystem
from ..leastsq import CASE1, CASE2, LsqProblem
from ..scalar import PrecisionSpec, parse_scalar, round_to

__all__ = ["FormatError", "ProblemFile", "parse_system", "parse_problem_file", "format_system",
           "parse_recipe"]


class FormatError(ValueError):
    pass


@dataclass
class ProblemFile:
    problem: object                      # LinearSystem | LsqProblem
    spec: PrecisionSpec | None
    directives: dict = field(default_factory=dict)   # key -> list of values (in file order)

    def get(self, key, default=None):
        vals = self.directives.get(key)
        return vals[-1] if vals else default


def _header(tokens, lineno):
    if not tokens:
        raise FormatError(f"line {lineno}: empty header")
    if tokens[0] == "exact":
        spec, rest = None, tokens[1:]
    elif tokens[0] == "fixed":
        if len(tokens) < 2:
            raise FormatError(f"line {lineno}: 'fixed' needs frac=K or sig=K")
        try:
            spec = PrecisionSpec.parse(tokens[1])
        except ValueError as exc:
            raise FormatError(f"line {lineno}: unknown precision spec {tokens[1]!r}") from exc
        rest = tokens[2:]
    else:
        raise FormatError(f"line {lineno}: header must start with 'exact' or 'fixed', got {tokens[0]!r}")
    if len(rest) != 2 or not all(t.isdigit() for t in rest):
        raise FormatError(f"line {lineno}: header needs '<rows> <cols>'")
    rows, cols = int(rest[0]), int(rest[1])
    if rows < 1 or cols < 2:
        raise FormatError(f"line {lineno}: need at least one row and two columns")
    return spec, rows, cols


def _scalar(tok, spec, lineno):
    try:
        value = parse_scalar(tok)
    except ValueError as exc:
        raise FormatError(f"line {lineno}: {exc}") from None
    if spec is None:
        return value
    fixed = round_to(value, spec)
    if fixed.to_fraction() != value:
        raise FormatError(f"line {lineno}: {tok!r} mixes scalar kinds; not representable under {spec}")
    return fixed


def parse_problem_file(text: str) -> ProblemFile:
    directives: dict = {}
    header = None
    data = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#!"):
            key, _, value = line[2:].strip().partition(" ")
            if key:
                directives.setdefault(key, []).append(value.strip())
            continue
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if header is None:
            header = _header(tokens, lineno)
            continue
        spec, rows, cols = header
        if len(tokens) != cols:
            raise FormatError(f"line {lineno}: ragged row, {len(tokens)} tokens for {cols} columns")
        data.append([_scalar(t, spec, lineno) for t in tokens])
    if header is None:
        raise FormatError("missing header")
    spec, rows, cols = header
    if len(data) != rows:
        raise FormatError(f"header promises {rows} rows, found {len(data)}")
    aug = np.empty((rows, cols), dtype=object)
    for i, r in enumerate(data):
        aug[i, :] = r
    A, b = aug[:, :-1], aug[:, -1]
    names = tuple(directives["vars"][-1].split()) if "vars" in directives else ()
    case = directives.get("case", [None])[-1]
    if case is None and rows == cols - 1:
        problem = LinearSystem(A, b, names)
    elif case in (None, "1", "2"):
        kind = {None: None, "1": CASE1, "2": CASE2}[case]
        problem = LsqProblem.infer(A, b) if kind is None else LsqProblem(kind, A, b)
    else:
        raise FormatError(f"unknown case {case!r}")
    return ProblemFile(problem, spec, directives)


def parse_system(text: str):
    """The problem (LinearSystem or LsqProblem) described by ``text``."""
    return parse_problem_file(text).problem


def _tok(v) -> str:
    return v.plain() if hasattr(v, "plain") else str(v)


def format_system(problem, spec: PrecisionSpec | None = None) -> str:
    """Inverse of :func:`parse_system` (directives other than vars/case are not kept)."""
    A, b = problem.A, problem.b
    head = "exact" if spec is None else f"fixed {spec}"
    lines = []
    if isinstance(problem, LinearSystem):
        lines.append("#! vars " + " ".join(problem.names))
    else:
        lines.append("#! case " + ("1" if problem.kind == CASE1 else "2"))
    lines.append(f"{head} {A.shape[0]} {A.shape[1] + 1}")
    for row, rhs in zip(A, b):
        lines.append(" ".join(_tok(v) for v in row) + " " + _tok(rhs))
    return "\n".join(lines) + "\n"


_TERM = re.compile(r"\s*([+-]?)\s*(?:(\d+)\s*\*\s*)?(\d+)\s*")


def parse_recipe(text: str) -> list:
    """``"2+3; 4-1; 6*3"`` -> ``[{2: 1, 3: 1}, {4: 1, 1: -1}, {3: 6}]``.

    Each ``;``-separated item is a combination of earlier rows; ``k*r``
    means k times row r.
    """
    recipe = []
    for item in text.split(";"):
        item = item.strip()
        if not item:
            continue
        combo, pos = {}, 0
        while pos < len(item):
            m = _TERM.match(item, pos)
            if not m or m.end() == pos:
                raise FormatError(f"bad recipe term in {item!r}")
            sign = -1 if m.group(1) == "-" else 1
            coef = int(m.group(2) or 1)
            row = int(m.group(3))
            combo[row] = combo.get(row, 0) + sign * coef
            pos = m.end()
        recipe.append(combo)
    return recipe
