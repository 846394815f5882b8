"""Numbered hand-computing tables, their replay, and two serializations.

A :class:`Tableau` is an ordered list of rows; each row carries a step
number, one cell per column (``None`` for blank), the step numbers of the
rows it was formed from, and the operation that formed it.  Because the
operation is recorded, every derived row can be recomputed from its
sources (:func:`replay_tableau`).

Row operations (``op``) and what replay recomputes, one rounding per cell:

``given``        input data; not recomputed
``copy``         cells equal the source's cells of the same column
``divide``       source / its leading entry (leading cell becomes exactly 1)
``eliminate``    sources (d, t): t - t[c]*d for columns after d's lead column c
``backsub``      sources (d, s1, s2, ...): d is a divided row, each s a solved
                 row; value = d[last] - sum d[col(s)] * s[last]
``sum``          column sums of the sources
``explicit``     reciprocal -1/lead, then cells = source cells * reciprocal
``product``      sources (m, s): m[c0] * s[c], c0 = this row's first column
``constants``    cell of each source's variable = source's last cell
``fold-forward`` first cell = column sum of the rows above; later cells =
                 that sum * the single source's cell
``fold-back``    last cell = column sum of the rows above; cell i =
                 that sum * source_i[column of the sum]
``scale``        sources (s rows..., c rows...): cell k = s_k * c_k[reciprocal]
``crout``        one entry of Crout's auxiliary matrix (needs ``given``)
``benoit``       one row of the Cholesky/Benoit table
``benoit-y``     the bottom y row of the Benoit table
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .arithmetic import Arithmetic
from .scalar import FixedDec, PrecisionSpec, parse_scalar, round_to, to_fraction

__all__ = [
    "Tableau",
    "TableauRow",
    "TableauError",
    "replay_tableau",
    "render_text",
    "render_structured",
    "parse_structured",
    "LAYOUTS",
]

LAYOUTS = (
    "doolittle-A", "doolittle-B", "doolittle-C", "doolittle-D", "doolittle-E", "doolittle-F",
    "benoit", "crout", "dwyer",
)

MINUS = "−"
ARROW = "⇒"


class TableauError(ValueError):
    pass


@dataclass(frozen=True)
class TableauRow:
    step: int
    cells: tuple
    sources: tuple = ()
    op: str = "given"
    note: str = ""

    def numeric(self) -> list:
        """(column index, value) for cells holding numbers."""
        return [(i, c) for i, c in enumerate(self.cells) if c is not None and not isinstance(c, str)]

    def lead(self) -> tuple:
        found = self.numeric()
        if not found:
            raise TableauError(f"row {self.step} has no numeric cells")
        return found[0]

    def marker_column(self) -> int | None:
        return next((i for i, c in enumerate(self.cells) if isinstance(c, str)), None)

    @property
    def provenance(self) -> str:
        if not self.sources:
            return ""
        return ", ".join(str(s) for s in self.sources) + f" {ARROW}"


@dataclass(frozen=True)
class Tableau:
    layout: str
    columns: tuple
    rows: tuple = ()
    spec: PrecisionSpec | None = None
    split: int | None = None        # a bar is drawn before this column
    title: str = ""
    given: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.layout not in LAYOUTS:
            raise TableauError(f"unknown layout {self.layout!r}")
        steps = [r.step for r in self.rows]
        if any(b <= a for a, b in zip(steps, steps[1:])):
            raise TableauError("step numbers must strictly increase")
        for r in self.rows:
            if len(r.cells) != len(self.columns):
                raise TableauError(f"row {r.step} has {len(r.cells)} cells for {len(self.columns)} columns")

    def __eq__(self, other):
        if not isinstance(other, Tableau):
            return NotImplemented
        same_given = (self.given is None) == (other.given is None) and (
            self.given is None or np.array_equal(self.given, other.given))
        return (self.layout, self.columns, self.rows, self.spec, self.split, self.title) == \
            (other.layout, other.columns, other.rows, other.spec, other.split, other.title) and same_given

    def row(self, step: int) -> TableauRow:
        for r in self.rows:
            if r.step == step:
                return r
        raise KeyError(step)

    def col(self, name: str) -> int:
        return self.columns.index(name)

    def with_rows(self, rows) -> "Tableau":
        return replace(self, rows=tuple(rows))


# --- replay ---------------------------------------------------------------

def replay_tableau(t: Tableau, *context: Tableau) -> list:
    """Recompute every derived row; return the steps whose stored cells differ.

    ``context`` supplies other tableaux whose rows may be named as sources
    (Doolittle's tables refer to each other).  An empty list means the
    tableau replays bit-exactly under its spec.
    """
    arith = Arithmetic(t.spec)
    lookup = {}
    for tab in (*context, t):
        for r in tab.rows:
            lookup[(id(tab), r.step)] = (tab, r)

    def source(step):
        hits = [v for (tid, s), v in lookup.items() if s == step and tid != id(t)]
        mine = [r for r in t.rows if r.step == step]
        if mine:
            return t, mine[0]
        if len(hits) != 1:
            raise TableauError(f"source step {step} not found (or ambiguous)")
        return hits[0]

    bad = []
    for pos, row in enumerate(t.rows):
        if row.op == "given":
            continue
        expect = _recompute(t, pos, row, source, arith)
        stored = tuple(None if c is None else (c if isinstance(c, str) else to_fraction(c)) for c in row.cells)
        if expect != stored:
            bad.append(row.step)
    return bad


def _f(x):
    return to_fraction(x)


def _col_named(tab: Tableau, name: str) -> int | None:
    return tab.columns.index(name) if name in tab.columns else None


def _recompute(t: Tableau, pos: int, row: TableauRow, source, arith: Arithmetic) -> tuple:
    cols = t.columns
    out = [None] * len(cols)
    for i, c in enumerate(row.cells):
        if isinstance(c, str):
            out[i] = c
    srcs = [source(s) for s in row.sources]

    def cell(pair, name):
        tab, r = pair
        j = _col_named(tab, name)
        v = None if j is None else r.cells[j]
        if v is None or isinstance(v, str):
            raise TableauError(f"row {r.step} has no value in column {name!r}")
        return _f(v)

    def wanted():
        return [i for i, c in enumerate(row.cells) if c is not None and not isinstance(c, str)]

    op = row.op
    if op == "copy":
        (src,) = srcs
        for i in wanted():
            out[i] = cell(src, cols[i])
    elif op == "divide":
        (src,) = srcs
        tab, r = src
        li, lv = r.lead()
        lead_name = tab.columns[li]
        for i in wanted():
            out[i] = Fraction(1) if cols[i] == lead_name else arith.div(cell(src, cols[i]), _f(lv))
    elif op == "eliminate":
        d, tgt = srcs
        li, _ = d[1].lead()
        lead_name = d[0].columns[li]
        m = cell(tgt, lead_name)
        for i in wanted():
            out[i] = arith.dot(cell(tgt, cols[i]), [(m, cell(d, cols[i]))], subtract=True)
    elif op == "backsub":
        d, *solved = srcs
        last = cols[-1]
        pairs = []
        for s in solved:
            si, _ = s[1].lead()
            pairs.append((cell(d, s[0].columns[si]), cell(s, s[0].columns[-1])))
        for i in wanted():
            out[i] = arith.dot(cell(d, last), pairs, subtract=True) if cols[i] == last else Fraction(1)
    elif op == "sum":
        for i in wanted():
            vals = []
            for s in srcs:
                j = _col_named(s[0], cols[i])
                if j is not None and s[1].cells[j] is not None and not isinstance(s[1].cells[j], str):
                    vals.append(_f(s[1].cells[j]))
            out[i] = _sum_round(arith, vals)
    elif op == "explicit":
        (src,) = srcs
        li, lv = src[1].lead()
        recip = arith.div(Fraction(-1), _f(lv))
        rcol = cols.index("reciprocal")
        for i in wanted():
            out[i] = recip if i == rcol else arith.mul(cell(src, cols[i]), recip)
    elif op == "product":
        m, s = srcs
        first = wanted()[0]
        mult = cell(m, cols[first])
        for i in wanted():
            out[i] = arith.mul(mult, cell(s, cols[i]))
    elif op == "constants":
        for s in srcs:
            mi = s[1].marker_column()
            out[cols.index(s[0].columns[mi])] = cell(s, s[0].columns[-1])
    elif op in ("fold-forward", "fold-back"):
        w = wanted()
        k = w[0] if op == "fold-forward" else w[-1]
        total = _sum_round(arith, [_f(r.cells[k]) for r in t.rows[:pos]
                                   if r.cells[k] is not None and not isinstance(r.cells[k], str)])
        out[k] = total
        if op == "fold-forward":
            (src,) = srcs
            for i in w[1:]:
                out[i] = arith.mul(total, cell(src, cols[i]))
        else:
            for i, src in zip(w[:-1], srcs):
                out[i] = arith.mul(total, cell(src, cols[k]))
    elif op == "scale":
        half = len(srcs) // 2
        for i, s, c in zip(wanted(), srcs[:half], srcs[half:]):
            si, sv = s[1].lead()
            out[i] = arith.mul(_f(sv), cell(c, "reciprocal"))
    elif op == "crout":
        out = _replay_crout(t, pos, row, arith)
    elif op in ("benoit", "benoit-y"):
        out = _replay_benoit(t, pos, row, arith)
    else:
        raise TableauError(f"row {row.step}: unknown op {op!r}")
    return tuple(out)


def _sum_round(arith: Arithmetic, vals) -> Fraction:
    vals = list(vals)
    if not vals:
        return Fraction(0)
    arith.ops.adds += len(vals) - 1
    return arith.round(sum(vals, Fraction(0)))


def _replay_crout(t: Tableau, pos: int, row: TableauRow, arith: Arithmetic) -> list:
    if t.given is None:
        raise TableauError("crout replay needs the given matrix")
    g = t.given
    aux = [[_f(c) for c in r.cells] for r in t.rows]
    i = pos
    out = []
    for j in range(len(t.columns)):
        if j <= i:
            pairs = [(aux[i][k], aux[k][j]) for k in range(j)]
            out.append(arith.dot(_f(g[i, j]), pairs, subtract=True))
        else:
            pairs = [(aux[i][k], aux[k][j]) for k in range(i)]
            out.append(arith.dot(_f(g[i, j]), pairs, subtract=True, divisor=aux[i][i]))
    return out


def _replay_benoit(t: Tableau, pos: int, row: TableauRow, arith: Arithmetic) -> list:
    p = len(t.columns) - 3
    rows = [[None if c is None else _f(c) for c in r.cells] for r in t.rows]
    beta = lambda i, j: rows[i][j]            # row i, beta^{j+1}_{i+1}, j <= i
    a = lambda i, j: rows[min(i, j)][max(i, j) + 1]
    kcol, lcol = p + 1, p + 2
    out = [None] * len(t.columns)
    if row.op == "benoit":
        i = pos
        for j in range(i):
            pairs = [(beta(i, k), beta(j, k)) for k in range(j)]
            out[j] = arith.dot(a(i, j), pairs, subtract=True, divisor=beta(j, j))
        inner = a(i, i) - sum((out[k] ** 2 for k in range(i)), Fraction(0))
        arith.ops.muls += i
        arith.ops.subs += i
        out[i] = arith.sqrt(inner)
        for j in range(i, p):
            out[j + 1] = rows[i][j + 1]
        out[kcol] = rows[i][kcol]
        # lambda by back substitution on beta^t lambda = y
        y = rows[p]
        lam = [None] * p
        for r in range(p - 1, -1, -1):
            pairs = [(beta(k, r), lam[k]) for k in range(r + 1, p)]
            lam[r] = arith.dot(y[r], pairs, subtract=True, divisor=beta(r, r))
        out[lcol] = lam[i]
    else:
        for i in range(p):
            pairs = [(beta(i, k), out[k]) for k in range(i)]
            out[i] = arith.dot(-rows[i][kcol], pairs, subtract=True, divisor=beta(i, i))
    return out


# --- text rendering ---------------------------------------------------------

def _fmt(v, style: str = "text") -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, FixedDec):
        s = v.styled()
        return s.replace("-", MINUS) if style == "text" else s
    v = Fraction(v)
    s = str(v)
    return s.replace("-", MINUS) if style == "text" else s


def render_text(t: Tableau) -> str:
    """Aligned fixed-width text: provenance, step, cells, bar, note.

    Byte-stable: widths depend only on the tableau's contents.
    """
    headers = [c for c in t.columns]
    body = [[_fmt(c) for c in r.cells] for r in t.rows]
    widths = [max([len(h)] + [len(b[i]) for b in body]) for i, h in enumerate(headers)]
    prov = [r.provenance for r in t.rows]
    pw = max([len(p) for p in prov] + [0])
    sw = max([len(str(r.step)) for r in t.rows] + [1])

    def line(prefix, step, cells):
        parts = []
        for i, c in enumerate(cells):
            if t.split is not None and i == t.split:
                parts.append("|")
            parts.append(c.rjust(widths[i]))
        return f"{prefix.rjust(pw)} {step.rjust(sw)} | " + " ".join(parts) + " |"

    out = []
    if t.title:
        out.append(t.title)
    out.append(line("", "", headers).rstrip())
    for r, cells, p in zip(t.rows, body, prov):
        text = line(p, str(r.step), cells)
        if r.note:
            text += " " + r.note
        out.append(text.rstrip())
    return "\n".join(out) + "\n"


# --- structured records ------------------------------------------------------

def render_structured(t: Tableau) -> str:
    """Line-oriented records in a fixed order:

    TABLEAU <layout> / TITLE <json> / SPEC <exact|frac=K|sig=K> /
    COLUMNS <json list> / SPLIT <int|-> / GIVEN <cells> (zero or more) /
    ROW <step> <op> <sources|-> <cells> / NOTE <step> <json> / END

    Cells: ``_`` blank, ``@text`` marker, otherwise a scalar literal.
    """
    lines = [f"TABLEAU {t.layout}", f"TITLE {json.dumps(t.title, ensure_ascii=False)}",
             f"SPEC {t.spec or 'exact'}", f"COLUMNS {json.dumps(list(t.columns), ensure_ascii=False)}",
             f"SPLIT {'-' if t.split is None else t.split}"]
    if t.given is not None:
        for grow in t.given:
            lines.append("GIVEN " + " ".join(_token(v) for v in grow))
    for r in t.rows:
        src = ",".join(str(s) for s in r.sources) or "-"
        lines.append(f"ROW {r.step} {r.op} {src} " + " ".join(_token(c) for c in r.cells))
        if r.note:
            lines.append(f"NOTE {r.step} {json.dumps(r.note, ensure_ascii=False)}")
    lines.append("END")
    return "\n".join(lines) + "\n"


def _token(v) -> str:
    if v is None:
        return "_"
    if isinstance(v, str):
        if any(ch.isspace() for ch in v):
            raise TableauError(f"marker {v!r} contains whitespace")
        return "@" + v
    if isinstance(v, FixedDec):
        return v.plain()
    return str(Fraction(v))


def _untoken(tok: str, spec):
    if tok == "_":
        return None
    if tok.startswith("@"):
        return tok[1:]
    value = parse_scalar(tok)
    if spec is None:
        return value
    fixed = round_to(value, spec)
    if fixed.to_fraction() != value:
        raise TableauError(f"{tok} is not representable under {spec}")
    return fixed


def parse_structured(text: str) -> Tableau:
    head = {}
    given, rows, notes = [], [], {}
    for n, raw in enumerate(text.splitlines(), 1):
        if not raw.strip():
            continue
        key, _, rest = raw.partition(" ")
        if key in ("TABLEAU", "SPEC", "SPLIT"):
            head[key] = rest.strip()
        elif key in ("TITLE", "COLUMNS"):
            head[key] = json.loads(rest)
        elif key == "GIVEN":
            given.append(rest.split())
        elif key == "ROW":
            rows.append(rest.split())
        elif key == "NOTE":
            step, _, note = rest.partition(" ")
            notes[int(step)] = json.loads(note)
        elif key == "END":
            break
        else:
            raise TableauError(f"line {n}: unknown record {key!r}")
    for k in ("TABLEAU", "SPEC", "COLUMNS", "SPLIT"):
        if k not in head:
            raise TableauError(f"missing {k} record")
    spec = None if head["SPEC"] == "exact" else PrecisionSpec.parse(head["SPEC"])
    g = None
    if given:
        g = np.empty((len(given), len(given[0])), dtype=object)
        for i, toks in enumerate(given):
            for j, tok in enumerate(toks):
                g[i, j] = _untoken(tok, spec)
    out_rows = []
    for toks in rows:
        step, op, src, *cells = toks
        sources = () if src == "-" else tuple(int(s) for s in src.split(","))
        out_rows.append(TableauRow(int(step), tuple(_untoken(c, spec) for c in cells), sources, op,
                                   notes.get(int(step), "")))
    return Tableau(head["TABLEAU"], tuple(head["COLUMNS"]), tuple(out_rows), spec,
                   None if head["SPLIT"] == "-" else int(head["SPLIT"]), head.get("TITLE", ""), g)
