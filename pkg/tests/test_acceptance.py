"""Acceptance criteria 1-11, one test each.

Every test records a single PASS/FAIL line (shown in pytest's terminal
summary, or printed when this file is run as a script) and then asserts.
"""
from fractions import Fraction
import random
import shutil
import time

import numpy as np
import pytest

from gausselim.arithmetic import as_matrix, as_vector, lift
from gausselim.compact import (cholesky_squared, crout_solve, doolittle_refine, doolittle_solve,
                               dwyer_single_division, satterthwaite_solve)
from gausselim.cracovian import NONASSOCIATIVE_WITNESS, Cracovian, cracovian_product
from gausselim.eliminate import (LinearSystem, combine_rows, format_equation, fraction_free_solve, rolle_solve,
                                 schoolbook_solve)
from gausselim.leastsq import (LsqProblem, bracket_from_normal, bracket_init, bracket_reduce_all, build_normal,
                               correlate_recover, gauss_reduce_solve, omega)
from gausselim.matrixcore import (SingularMatrixError, identity, inverse, ldu_decompose, ldu_solve, mat_mul,
                                  mat_vec, transpose)
from gausselim.scalar import PrecisionSpec, parse_scalar
from gausselim.tableau import render_text
from gausselim.workbench import cli_main
from gausselim.workbench.corpus import default_dir

from conftest import ACCEPTANCE_LINES, DWYER_A, DWYER_B, cramer, fr, fv, random_spd, random_system, tolist, vlist

FRAC4 = PrecisionSpec("frac", 4)
SIG3 = PrecisionSpec("sig", 3)


def record(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def system(A, b, names=()):
    return LinearSystem(fr(A), fv(b), names)


# 1 ---------------------------------------------------------------------------

def test_criterion_01_schoolbook_golden():
    x, trace = schoolbook_solve(system([[1, 2, 1], [1, 1, 2], [2, 1, 1]], [3, 9, 16]))
    want_systems = [
        [[1, 2, 1, 3], [1, 1, 2, 9], [2, 1, 1, 16]],
        [[1, 2, 1, 3], [0, -1, 1, 6], [0, -3, -1, 10]],
        [[1, 2, 1, 3], [0, -1, 1, 6], [0, 0, -4, -8]],
    ]
    got = [tolist(m) for _, m in trace.snapshots]
    ok = vlist(x) == [9, -4, 2] and got == want_systems
    record(1, ok, f"x = {tuple(map(str, vlist(x)))}, {len(got)} equivalent systems traced")


# 2 ---------------------------------------------------------------------------

def test_criterion_02_ldu_golden():
    A = fr([[1, 2, 1], [1, 1, 2], [2, 1, 1]])
    fact, _ = ldu_decompose(A)
    ok = (tolist(fact.L) == [[1, 0, 0], [1, 1, 0], [2, 3, 1]]
          and tolist(fact.DU) == [[1, 2, 1], [0, -1, 1], [0, 0, -4]]
          and tolist(fact.reconstruct()) == tolist(A))
    show = lambda m: [[str(v) for v in r] for r in tolist(m)]
    record(2, ok, f"L = {show(fact.L)}, DU = {show(fact.DU)}, LDU == A")


# 3 ---------------------------------------------------------------------------

def test_criterion_03_corpus_goldens():
    checks = {}
    x, _ = schoolbook_solve(system([[3, 2, 1], [2, 3, 1], [1, 2, 3]], [39, 34, 26]))
    checks["nine chapters"] = vlist(x) == [Fraction(37, 4), Fraction(17, 4), Fraction(11, 4)]

    _, trace = fraction_free_solve(system([[3, 1, 1], [1, 4, 1], [1, 1, 5]], [42, 32, 40]))
    checks["buteo"] = tolist(trace.snapshots[-1][1])[2][2:] == [150, 750]

    rows = combine_rows(system([[2, 1, 1], [1, 3, 1], [1, 1, 4]], [64, 84, 124]),
                        [{2: 1, 3: 1}, {4: 1, 1: -1}, {1: 1, 2: 1}, {1: 1, 3: 1}, {6: 1, 7: 1}, {3: 6},
                         {9: 1, 8: -1}])
    checks["peletier"] = [Fraction(v) for v in rows[-1][1]] == [0, 0, 17, 408]

    x, trace = rolle_solve(system([[1, 1, 1, 0], [1, 1, 0, 1], [1, 0, 1, 1], [0, 1, 1, 1]], [6, 7, 8, 9], "xyzv"),
                           order="xvzy")
    last = trace.last_direction
    checks["rolle"] = (vlist(x) == [1, 2, 3, 4]
                       and format_equation(last.coeffs, last.rhs, trace.names, trace.order) == "3y = 6")

    x, _ = schoolbook_solve(system([[1, 1], [Fraction(2, 3), Fraction(-1, 2)]], [1800, 500]))
    checks["babylonian"] = vlist(x) == [1200, 600]

    A = [[1, -1, 0, 0, 0, -1], [0, 1, -1, 0, 0, -1], [0, 0, 1, -1, 0, -1], [0, 0, 0, 1, -1, -1],
         [1, 1, 1, 1, 1, 0], [1, 1, 1, -7, -7, 0]]
    x, _ = schoolbook_solve(system(A, [0, 0, 0, 0, 100, 0]), pivoting=True)
    checks["rhind"] = vlist(x)[:5] == [Fraction(115, 3), Fraction(175, 6), 20, Fraction(65, 6), Fraction(5, 3)]

    bad = [k for k, v in checks.items() if not v]
    record(3, not bad, f"{len(checks) - len(bad)}/{len(checks)} goldens exact" + (f"; failing {bad}" if bad else ""))


# 4 ---------------------------------------------------------------------------

# The printed figure, verbatim: (sources, step, cells x1..x4, r.h.s., note).
FIGURE = [
    ("", 1, ["1.0000", ".4000", ".5000", ".6000"], ".2000", "original equations"),
    ("", 2, [".4000", "1.0000", ".3000", ".4000"], ".4000", ""),
    ("", 3, [".5000", ".3000", "1.0000", ".2000"], ".6000", ""),
    ("", 4, [".6000", ".4000", ".2000", "1.000"], ".8000", ""),
    ("1", 5, ["1.0000", ".4000", ".5000", ".6000"], ".2000", "elimination, part 1"),
    ("5, 2", 6, ["", ".8400", ".1000", ".1600"], ".3200", ""),
    ("5, 3", 7, ["", ".1000", ".7500", "−.1000"], ".5000", ""),
    ("5, 4", 8, ["", ".1600", "−.1000", ".6400"], ".6800", ""),
    ("6", 9, ["", "1.0000", ".1190", ".1905"], ".3810", "elimination, part 2"),
    ("9, 7", 10, ["", "", ".7381", "−.1190"], ".4619", ""),
    ("9, 8", 11, ["", "", "−.1190", ".6095"], ".6190", ""),
    ("10", 12, ["", "", "1.0000", "−.1612"], ".6258", "elimination, part 3"),
    ("12, 11", 13, ["", "", "", ".5903"], ".6935", ""),
    ("13", 14, ["", "", "", "1.0000"], "1.1748", "back-substitution"),
    ("11, 14", 15, ["", "", "1.0000", ""], ".8152", ""),
    ("9, 14, 15", 16, ["", "1.0000", "", ""], ".0602", ""),
    ("5, 14, 15, 16", 17, ["1.0000", "", "", ""], "−.9366", ""),
]
# the figure's two slips: a dropped digit on an input, and row 15 naming
# row 11 although its value comes from the divided row 12
FIGURE_ERRATA = {(4, "x4"): ("1.000", "1.0000"), (15, "sources"): ("11, 14", "12, 14")}


def _figure_cells(tab):
    out = {}
    for r in tab.rows:
        out[(r.step, "sources")] = ", ".join(map(str, r.sources))
        for name, c in zip(tab.columns, r.cells):
            out[(r.step, name)] = "" if c is None else c.styled().replace("-", "−")
        out[(r.step, "note")] = r.note
    return out


def test_criterion_04_dwyer_golden():
    x, tab = dwyer_single_division(as_matrix(DWYER_A, FRAC4), as_vector(DWYER_B, FRAC4))
    rendered = render_text(tab)
    golden = (default_dir() / "dwyer.golden").read_text(encoding="utf-8")
    ours = _figure_cells(tab)
    diffs = {}
    for sources, step, cells, rhs, note in FIGURE:
        printed = dict(zip(("x1", "x2", "x3", "x4", "r.h.s."), cells + [rhs])) | {"sources": sources, "note": note}
        for key, want in printed.items():
            if ours[(step, key)] != want:
                diffs[(step, key)] = (want, ours[(step, key)])
    solutions = [c.styled() for c in x]
    ok = (rendered == golden and len(tab.rows) == 17 and diffs == FIGURE_ERRATA
          and solutions == ["-.9366", ".0602", ".8152", "1.1748"])
    record(4, ok, f"17 rows, render == golden byte-for-byte: {rendered == golden}; "
                  f"differences from the printed figure limited to its {len(FIGURE_ERRATA)} slips: "
                  f"{diffs == FIGURE_ERRATA}; x = {solutions}")


# 5 ---------------------------------------------------------------------------

def test_criterion_05_operation_count():
    n = 18
    H = fr([[Fraction(1, i + j + 1) for j in range(n)] for i in range(n)])   # no zero appears anywhere
    _, _, trace = ldu_solve(H, fv([1] * n))
    total = trace.ops.total
    ratio = total / 3888
    record(5, abs(ratio - 1) <= 0.15, f"{total} ops ({trace.ops.as_dict()}) = {ratio:.3f} x 3888; tolerance 15%")


# 6 ---------------------------------------------------------------------------

def test_criterion_06_equivalence_suite():
    rng = random.Random(6)
    start = time.perf_counter()
    mismatches, natural_skips, non_integral = [], 0, 0
    for k in range(200):
        integer = k % 2 == 0
        A, b = random_system(rng, rng.randint(1, 6), integer=integer)
        s = system(A, b)
        ref, _ = schoolbook_solve(s, pivoting=True)
        ref = vlist(ref)
        ff, ff_trace = fraction_free_solve(s)
        results = {"fraction-free": vlist(ff), "ldu": vlist(ldu_solve(fr(A), fv(b), pivoting=True)[0])}
        if integer and not all(v.denominator == 1 for _, m in ff_trace.snapshots for v in m.flat):
            non_integral += 1
        natural = {
            "schoolbook": lambda: schoolbook_solve(s)[0],
            "rolle": lambda: rolle_solve(s)[0],
            "crout": lambda: crout_solve(fr(A), fv(b))[0],
            "dwyer": lambda: dwyer_single_division(fr(A), fv(b))[0],
            "satterthwaite": lambda: satterthwaite_solve(fr(A), fv(b)),
        }
        for name, fn in natural.items():
            try:
                results[name] = vlist(fn())
            except SingularMatrixError:
                natural_skips += 1
        mismatches += [(k, name) for name, v in results.items() if v != ref]
    elapsed = time.perf_counter() - start
    ok = not mismatches and not non_integral and elapsed < 10
    record(6, ok, f"200 systems, {len(mismatches)} mismatches, {natural_skips} natural-pivot skips, "
                  f"{non_integral} non-integral fraction-free traces, {elapsed:.2f} s")


# 7 ---------------------------------------------------------------------------

def _random_full_rank(rng, rows, cols):
    while True:
        A = [[Fraction(rng.randint(-5, 5)) for _ in range(cols)] for _ in range(rows)]
        M = A if rows >= cols else [list(c) for c in zip(*A)]
        MtM = [[sum(M[k][i] * M[k][j] for k in range(len(M))) for j in range(len(M[0]))] for i in range(len(M[0]))]
        try:
            ldu_decompose(fr(MtM), pivoting=True)
            return A
        except SingularMatrixError:
            continue


def test_criterion_07_least_squares_suite():
    rng = random.Random(7)
    failures = []
    for k in range(100):
        # case 1: overdetermined
        mu = rng.randint(1, 4)
        A = _random_full_rank(rng, rng.randint(mu, mu + 4), mu)
        b = [Fraction(rng.randint(-9, 9)) for _ in A]
        p = LsqProblem("case1", fr(A), fv(b))
        N, rhs = build_normal(p)
        t = bracket_reduce_all(bracket_init(p.A, p.b))
        x_br = vlist(gauss_reduce_solve(t))
        x_do = vlist(doolittle_solve(N, rhs)[0])
        x_ch = vlist(cholesky_squared(N, rhs).lam)
        r = mat_vec(fr(A), fv(x_br)) - fv(b)
        normal_ok = not any(mat_vec(transpose(fr(A)), r))
        if not (x_br == x_do == x_ch and normal_ok and t.get(mu, mu, mu) == omega(p.A, p.b, fv(x_br))):
            failures.append(("case1", k))

        # case 2: underdetermined, minimum norm
        rows = rng.randint(1, 3)
        cols = rng.randint(rows, rows + 3)
        A = _random_full_rank(rng, rows, cols)
        b = [Fraction(rng.randint(-9, 9)) for _ in range(rows)]
        p = LsqProblem("case2", fr(A), fv(b))
        N, rhs = build_normal(p)
        t = bracket_reduce_all(bracket_from_normal(N, rhs))
        x_br = vlist(correlate_recover(p, gauss_reduce_solve(t)))
        x_do = vlist(correlate_recover(p, doolittle_solve(N, rhs)[0]))
        x_ch = vlist(correlate_recover(p, cholesky_squared(N, rhs).lam))
        feasible = vlist(mat_vec(fr(A), fv(x_br))) == b
        norm = sum(v * v for v in x_br)
        Ninv = inverse(N)
        beaten = True
        for _ in range(100):
            z = fv([Fraction(rng.randint(-20, 20), rng.randint(1, 4)) for _ in range(cols)])
            # z minus its row-space component: a null-space direction
            w = mat_vec(Ninv, mat_vec(fr(A), z))
            other = fv(x_br) + z - mat_vec(transpose(fr(A)), w)
            if vlist(mat_vec(fr(A), other)) != b or sum(v * v for v in other) < norm:
                beaten = False
        if not (x_br == x_do == x_ch and feasible and beaten and t.get(rows, rows, rows) == -norm):
            failures.append(("case2", k))
    record(7, not failures, f"100 case-1 + 100 case-2 problems; bracket = Doolittle = Cholesky(squared); "
                            f"{len(failures)} failures {failures[:5]}")


# 8 ---------------------------------------------------------------------------

def test_criterion_08_toeplitz_relation():
    rng = random.Random(8)
    bad = 0
    for _ in range(50):
        S = fr(random_spd(rng, 4))
        sq = cholesky_squared(S, fv([0] * 4))
        # beta = L D^(1/2), so beta^-t beta^-1 = L^-t D^-1 L^-1, all rational
        Linv = inverse(sq.L, pivoting=False)
        Dinv = fr([[1 / sq.D[i, i] if i == j else 0 for j in range(4)] for i in range(4)])
        lhs = mat_mul(mat_mul(transpose(Linv), Dinv), Linv)
        if tolist(mat_mul(S, lhs)) != tolist(identity(4)) or tolist(lhs) != tolist(inverse(S)):
            bad += 1
    record(8, bad == 0, f"50 SPD 4x4 matrices (M^t M + I): (beta^-1)^t beta^-1 == S^-1 in {50 - bad}")


# 9 ---------------------------------------------------------------------------

def test_criterion_09_refinement():
    rng = random.Random(9)
    exact_ok = 0
    for _ in range(20):
        N = random_spd(rng, rng.randint(2, 5))
        b = [Fraction(rng.randint(-9, 9)) for _ in N]
        want = cramer(N, b)
        rough = [v + Fraction(rng.randint(-99, 99), rng.randint(1, 50)) for v in want]
        rep = doolittle_refine(fr(N), fv([-v for v in b]), fv(rough), spec=None)
        exact_ok += vlist(rep.solution) == want

    A_exact, b_exact = fr(DWYER_A), fr([DWYER_B])[0]
    want = cramer(tolist(A_exact), vlist(b_exact))
    x3, _ = doolittle_solve(as_matrix(DWYER_A, SIG3), as_vector(DWYER_B, SIG3))
    before = max(abs(a - w) for a, w in zip(vlist(x3), want))
    rep = doolittle_refine(A_exact, np.array([-v for v in b_exact], dtype=object), lift(x3), spec=SIG3)
    after = max(abs(a - w) for a, w in zip(vlist(rep.solution), want))
    ok = exact_ok == 20 and after < before
    record(9, ok, f"rational: {exact_ok}/20 exact after one step; Dwyer matrix at sig=3: "
                  f"max error {float(before):.3g} -> {float(after):.3g}")


# 10 --------------------------------------------------------------------------

def test_criterion_10_cracovian():
    rng = random.Random(10)
    bad = 0
    for _ in range(100):
        k, m, n = rng.randint(1, 5), rng.randint(1, 5), rng.randint(1, 5)
        a = fr([[Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(m)] for _ in range(k)])
        b = fr([[Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n)] for _ in range(k)])
        bad += tolist(cracovian_product(a, b)) != tolist(mat_mul(transpose(a), b))
    A, B, C = (Cracovian(np.array(w, dtype=object)) for w in NONASSOCIATIVE_WITNESS)
    witness = (A ^ B) ^ C != A ^ (B ^ C)
    record(10, bad == 0 and witness, f"{100 - bad}/100 products equal A^t B; stored witness non-associative: "
                                     f"{witness}")


# 11 --------------------------------------------------------------------------

def _corruptions(directory):
    """(file name, old line, new line) for every expected value in the corpus."""
    out = []
    for path in sorted(directory.glob("*.txt")):
        for line in path.read_text(encoding="utf-8").splitlines():
            words = line.split()
            if words[:2] == ["#!", "expect"]:
                for i in range(2, len(words)):
                    bumped = words[:i] + [str(parse_scalar(words[i]) + 1)] + words[i + 1:]
                    out.append((path.name, line, " ".join(bumped)))
            elif words[:2] == ["#!", "landmark"] and "=" in words:
                cut = words.index("=")
                for i in range(cut + 1, len(words)):
                    try:
                        value = parse_scalar(words[i])
                    except ValueError:
                        continue
                    bumped = words[:i] + [str(value + 1)] + words[i + 1:]
                    out.append((path.name, line, " ".join(bumped)))
    out.append(("dwyer.golden", "1.1748", "1.1749"))
    return out


def test_criterion_11_cli(tmp_path, capsys):
    clean = cli_main(["corpus"])
    corrupted, flipped = 0, 0
    for name, old, new in _corruptions(default_dir()):
        work = tmp_path / f"c{corrupted}"
        shutil.copytree(default_dir(), work)
        target = work / name
        text = target.read_text(encoding="utf-8")
        assert old in text
        target.write_text(text.replace(old, new, 1), encoding="utf-8")
        corrupted += 1
        flipped += cli_main(["corpus", "--dir", str(work)]) == 1
        shutil.rmtree(work)
    singular = tmp_path / "singular.txt"
    singular.write_text("exact 2 3\n1 1 1\n1 1 2\n", encoding="utf-8")
    capsys.readouterr()
    verify_code = cli_main(["verify", str(singular)])
    verify_out = capsys.readouterr().out
    ok = clean == 0 and flipped == corrupted and verify_code == 1 and "flag: consistent-failure" in verify_out
    record(11, ok, f"corpus exit {clean}; {flipped}/{corrupted} single-value corruptions exit 1; "
                   f"verify on singular system exit {verify_code} with consistent-failure flag")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
