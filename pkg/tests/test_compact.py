from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

from gausselim.arithmetic import as_matrix, as_vector, lift
from gausselim.compact import (IrrationalRootError, NotPositiveDefiniteError, RefinementDivergedError,
                               cholesky_factor, cholesky_normal_solve, cholesky_solve, cholesky_squared,
                               crout_solve, doolittle_forward, doolittle_refine, doolittle_solve,
                               dwyer_single_division, improve_inverse, satterthwaite_factor, satterthwaite_solve)
from gausselim.eliminate import schoolbook_solve
from gausselim.leastsq import LsqProblem, bracket_from_normal
from gausselim.matrixcore import (InconsistentSystemError, ShapeError, SingularMatrixError, identity, inverse,
                                  ldu_decompose, mat_mul, transpose)
from gausselim.scalar import PrecisionSpec
from gausselim.tableau import render_text, replay_tableau

from conftest import (DWYER_A, DWYER_B, EQ1_A, EQ1_B, cramer, fr, fv, solvable_systems, spd_matrices, tolist,
                      vlist)

FRAC4 = PrecisionSpec("frac", 4)
SIG3 = PrecisionSpec("sig", 3)


def neg(v):
    return np.array([-x for x in v], dtype=object)


def explicit_pivots(ta):
    return [r for r in ta.rows if r.op in ("given", "sum")]


# -- Doolittle ---------------------------------------------------------------

def test_doolittle_one_unknown():
    ta, tb = doolittle_forward(fr([[4]]), fv([8]))
    given, explicit = ta.rows
    assert given.cells[1] == 4 and given.cells[-1] == 8
    assert explicit.cells[0] == Fraction(-1, 4) and explicit.cells[-1] == -2
    assert explicit.cells[1] == "w="
    assert tb.rows == ()
    x, _ = doolittle_solve(fr([[4]]), fv([-8]))
    assert vlist(x) == [-2]


def test_doolittle_dwyer_pivots_match_single_division():
    A, b = fr(DWYER_A), fr([DWYER_B])[0]
    ta, _ = doolittle_forward(A, neg(b))
    pivots = [r.cells[1 + k] for k, r in enumerate(explicit_pivots(ta))]
    _, tab = dwyer_single_division(A, b)
    # the leading entries of the rows Dwyer divides
    divided = [tab.row(s).cells[k] for k, s in enumerate((1, 6, 10, 13))]
    assert pivots == divided
    assert pivots[:2] == [1, Fraction(84, 100)]
    assert float(pivots[2]) == pytest.approx(.7381, abs=5e-5) and float(pivots[3]) == pytest.approx(.5903, abs=5e-5)
    x, _ = doolittle_solve(A, b)
    xd, _ = dwyer_single_division(A, b)
    assert vlist(x) == vlist(xd) == cramer(tolist(A), vlist(b))


@given(spd_matrices(1, 4))
def test_doolittle_pivot_rows_are_du(N):
    fact, _ = ldu_decompose(fr(N))
    ta, tb = doolittle_forward(fr(N), fv([1] * len(N)))
    du = tolist(fact.DU)
    for k, r in enumerate(explicit_pivots(ta)):
        assert [r.cells[1 + j] for j in range(k, len(N))] == du[k][k:]
    assert not replay_tableau(ta, tb)
    assert not replay_tableau(tb, ta)


@given(spd_matrices(1, 4))
def test_doolittle_matches_schoolbook(N):
    b = fv(range(1, len(N) + 1))
    x, tables = doolittle_solve(fr(N), b)
    assert vlist(x) == vlist(schoolbook_solve(fr(N), b)[0])
    for key in "ABCD":
        assert not replay_tableau(tables[key], *tables.values())


def test_doolittle_multiplier_is_bracket_ratio():
    N = fr([[4, 2, 1], [2, 5, 3], [1, 3, 6]])
    ta, _ = doolittle_forward(N, fv([1, 2, 3]))
    explicit = [r for r in ta.rows if r.op == "explicit"][0]
    # the x-column entry of the first explicit function is −[ab]/[aa]
    t = bracket_from_normal(N, fv([-1, -2, -3]))
    assert explicit.cells[ta.col("x")] == -t["[ab]"] / t["[aa]"]


def test_doolittle_rejects_non_spd():
    with pytest.raises(NotPositiveDefiniteError):
        doolittle_forward(fr([[1, 2], [2, 1]]), fv([1, 1]))
    with pytest.raises(ValueError):
        doolittle_forward(fr([[1, 2], [3, 4]]), fv([1, 1]))
    with pytest.raises(ShapeError):
        doolittle_forward(fr([[1, 2], [2, 5]]), fv([1]))


def test_refine_exact_start_is_a_fixed_point():
    N = fr([[4, 1], [1, 3]])
    x = cramer([[4, 1], [1, 3]], [1, 2])
    rep = doolittle_refine(N, fv([-1, -2]), fv(x), spec=None, max_iters=3)
    assert len(rep.iterations) == 1
    assert not any(rep.iterations[0].residual) and not any(rep.iterations[0].correction)
    assert rep.final_residual_norm == 0


@given(spd_matrices(2, 4))
def test_rational_refinement_is_exact_in_one_step(N):
    b = list(range(1, len(N) + 1))
    exact = cramer(N, b)
    rough = [v + Fraction(1, 7) for v in exact]
    rep = doolittle_refine(fr(N), fv([-v for v in b]), fv(rough), spec=None, max_iters=1)
    assert vlist(rep.solution) == exact


def test_refinement_at_three_digits_on_dwyer_matrix():
    A = as_matrix(DWYER_A, SIG3)
    b = as_vector(DWYER_B, SIG3)
    exact = cramer(fr(DWYER_A).tolist(), vlist(fr([DWYER_B])[0]))
    x3, _ = doolittle_solve(A, b)
    err0 = max(abs(a - e) for a, e in zip(vlist(x3), exact))
    rep = doolittle_refine(fr(DWYER_A), neg(fr([DWYER_B])[0]), lift(x3), spec=SIG3)
    err1 = max(abs(a - e) for a, e in zip(vlist(rep.solution), exact))
    assert err1 < err0
    step = rep.iterations[0]
    tables = dict(rep.tables) | {"E": step.table_e, "F": step.table_f}
    assert not replay_tableau(step.table_e, *tables.values())
    assert not replay_tableau(step.table_f, *tables.values())


def hilbert_like(shift):
    return fr([[Fraction(1, i + j + 1) + (shift if i == j else 0) for j in range(4)] for i in range(4)])


def _residual_norm(N, x, b):
    return max(abs(sum(N[i, j] * x[j] for j in range(4)) - b[i]) for i in range(4))


def test_two_refinements_on_shifted_hilbert():
    N, b = hilbert_like(Fraction(1, 10)), fv([10, 20, 30, 40])
    x1, _ = doolittle_solve(N, b, spec=FRAC4)
    before = _residual_norm(N, lift(x1), b)
    rep = doolittle_refine(N, neg(b), lift(x1), spec=FRAC4, max_iters=2)
    assert len(rep.iterations) == 2
    assert rep.final_residual_norm * 10 <= before


def test_plain_hilbert_refinement_diverges_at_four_places():
    N, b = hilbert_like(0), fv([1, 2, 3, 4])
    x1, _ = doolittle_solve(N, b, spec=FRAC4)
    with pytest.raises(RefinementDivergedError) as err:
        doolittle_refine(N, neg(b), lift(x1), spec=FRAC4, max_iters=2)
    assert err.value.report.solution is not None


# -- Cholesky ----------------------------------------------------------------

def test_cholesky_examples():
    out = cholesky_solve(LsqProblem("case2", fr([[2, 0], [0, 2]]), fv([4, 6])))
    assert tolist(out.beta) == [[2, 0], [0, 2]]
    assert vlist(out.lam) == [1, Fraction(3, 2)]
    assert vlist(out.x) == [2, 3]
    assert tolist(cholesky_factor(fr([[4, 2], [2, 2]]))) == [[2, 0], [1, 1]]
    out = cholesky_normal_solve(identity(3), fv([1, 2, 3]))
    assert tolist(out.beta) == tolist(identity(3))
    assert vlist(out.y) == vlist(out.lam) == [1, 2, 3]


def test_benoit_tableau_replays():
    out = cholesky_normal_solve(fr([[4, 2], [2, 2]]), fv([2, 4]))
    assert out.tableau.columns[-2:] == ("K", "λ")
    assert out.tableau.rows[-1].note == "y"
    assert not replay_tableau(out.tableau)
    out = cholesky_normal_solve(as_matrix(DWYER_A, FRAC4), as_vector(DWYER_B, FRAC4))
    assert not replay_tableau(out.tableau)


def test_cholesky_irrational_and_non_spd():
    with pytest.raises(IrrationalRootError):
        cholesky_factor(fr([[2, 1], [1, 2]]))
    with pytest.raises(NotPositiveDefiniteError):
        cholesky_factor(fr([[1, 2], [2, 1]]))
    with pytest.raises(ShapeError):
        cholesky_factor(fr([[1, 2], [3, 4]]))
    with pytest.raises(ValueError):
        cholesky_solve(LsqProblem("case1", fr([[1], [1]]), fv([1, 2])))
    with pytest.raises(NotPositiveDefiniteError):
        cholesky_squared(fr([[1, 2], [2, 1]]), fv([1, 1]))


@given(spd_matrices(1, 4))
def test_squared_form(N):
    rhs = fv(range(1, len(N) + 1))
    sq = cholesky_squared(fr(N), rhs)
    p = len(N)
    # (β βᵗ)[i, j] = Σ_k s_ik s_jk sqrt(b²_ik b²_jk); each product is L_ik L_jk D_k
    for i in range(p):
        for j in range(p):
            total = sum((sq.L[i, k] * sq.L[j, k] * sq.D[k, k] for k in range(min(i, j) + 1)), Fraction(0))
            assert total == N[i][j]
            if j <= i:
                assert sq.beta_sq[i, j] == sq.L[i, j] ** 2 * sq.D[j, j]
    assert vlist(sq.lam) == cramer(N, vlist(rhs))
    assert all(v >= 0 for v in sq.y_sq)


def test_fixed_cholesky_reconstructs_within_rounding():
    N = as_matrix(DWYER_A, FRAC4)
    beta = lift(cholesky_factor(N))
    diff = mat_mul(beta, transpose(beta)) - lift(N)
    assert max(abs(v) for v in diff.flat) < Fraction(5, 10**4)


# -- Crout -------------------------------------------------------------------

def test_crout_identity():
    x, tab, _ = crout_solve(identity(3), fv([4, 5, 6]))
    assert vlist(x) == [4, 5, 6]
    assert [list(r.cells) for r in tab.rows] == tolist(tab.given)


def test_crout_eq1_is_ld_times_u():
    x, tab, _ = crout_solve(fr(EQ1_A), fv(EQ1_B))
    assert vlist(x) == [9, -4, 2]
    fact, _ = ldu_decompose(fr(EQ1_A))
    ld, u = tolist(fact.LD), tolist(fact.U)
    for i, r in enumerate(tab.rows):
        for j in range(3):
            assert r.cells[j] == (ld[i][j] if j <= i else u[i][j])
    assert not replay_tableau(tab)


def test_crout_one_rounding_per_entry():
    x, tab, ops = crout_solve(as_matrix(DWYER_A, FRAC4), as_vector(DWYER_B, FRAC4))
    n = 4
    assert ops.rounds == n * (n + 1) + n     # tableau entries plus the unknowns
    assert [c.styled() for c in x] == ["-.9366", ".0602", ".8153", "1.1748"]
    assert not replay_tableau(tab)


def test_crout_matches_doolittle_on_dwyer_matrix():
    A, b = fr(DWYER_A), fr([DWYER_B])[0]
    assert vlist(crout_solve(A, b)[0]) == vlist(doolittle_solve(A, b)[0])


@given(solvable_systems(1, 4))
def test_crout_dwyer_satterthwaite_agree(sys_):
    A, b = sys_
    want = cramer(A, b)
    try:
        xc = crout_solve(fr(A), fv(b))[0]
    except SingularMatrixError:
        return
    assert vlist(xc) == want
    assert vlist(dwyer_single_division(fr(A), fv(b))[0]) == want
    assert vlist(satterthwaite_solve(fr(A), fv(b))) == want


def test_compact_schemes_report_inconsistency():
    A, b = fr([[1, 1], [1, 1]]), fv([1, 2])
    for solve in (crout_solve, dwyer_single_division, satterthwaite_solve):
        with pytest.raises(InconsistentSystemError):
            solve(A, b)


# -- Dwyer -------------------------------------------------------------------

def test_dwyer_figure_values():
    x, tab = dwyer_single_division(as_matrix(DWYER_A, FRAC4), as_vector(DWYER_B, FRAC4))
    assert [c.styled() for c in x] == ["-.9366", ".0602", ".8152", "1.1748"]
    assert len(tab.rows) == 17
    styled = lambda s: [c.styled() for c in tab.row(s).cells if c is not None]
    assert styled(6) == [".8400", ".1000", ".1600", ".3200"]
    assert styled(12) == ["1.0000", "-.1612", ".6258"]
    assert not replay_tableau(tab)
    assert "12 | " in render_text(tab)


def test_dwyer_identity_and_exact():
    x, tab = dwyer_single_division(identity(2), fv([3, 4]))
    assert vlist(x) == [3, 4]
    A, b = fr(DWYER_A), fr([DWYER_B])[0]
    assert vlist(dwyer_single_division(A, b)[0]) == vlist(schoolbook_solve(A, b)[0])


# -- Satterthwaite --------------------------------------------------------------

def test_satterthwaite_factors():
    f = satterthwaite_factor(identity(3))
    assert not any(f.R1.flat) and not any(f.T1.flat) and tolist(f.S1) == tolist(identity(3))
    f = satterthwaite_factor(fr(EQ1_A))
    assert tolist(f.lower()) == [[1, 0, 0], [1, 1, 0], [2, 3, 1]]
    assert tolist(f.S1) == [[1, 0, 0], [0, -1, 0], [0, 0, -4]]
    assert tolist(f.upper()) == [[1, 2, 1], [0, 1, -1], [0, 0, 1]]
    assert tolist(f.reconstruct()) == EQ1_A


def test_improve_inverse():
    A = fr(DWYER_A)
    exact = inverse(A)
    assert tolist(improve_inverse(A, exact)) == tolist(exact)
    rough = np.array([[round(v * 10**4) / Fraction(10**4) + Fraction(3, 10**4) for v in row] for row in exact],
                     dtype=object)

    def defect(F):
        return max(abs(v) for v in (mat_mul(F, A) - identity(4)).flat)

    better = np.array([[round(v * 10**4) / Fraction(10**4) for v in row] for row in improve_inverse(A, rough)],
                      dtype=object)
    assert defect(better) < defect(rough)
    with pytest.raises(SingularMatrixError):
        improve_inverse(A, np.zeros((4, 4), dtype=object) + Fraction(0))
