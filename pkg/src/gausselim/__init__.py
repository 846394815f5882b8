"""Gaussian elimination in its historical variants, traced and cross-checked.

Exact work uses :class:`fractions.Fraction`; desk-calculator work uses
:class:`FixedDec` values at a :class:`PrecisionSpec`.
"""
from .arithmetic import Arithmetic, IrrationalRootError, OpCounter, as_matrix, as_vector, lift, spec_of
from .compact import (NotPositiveDefiniteError, RefinementDivergedError, cholesky_factor, cholesky_normal_solve,
                      cholesky_solve, cholesky_squared, crout_solve, doolittle_back, doolittle_forward,
                      doolittle_refine, doolittle_solve, dwyer_single_division, improve_inverse,
                      satterthwaite_factor, satterthwaite_solve)
from .cracovian import Cracovian, cracovian_product
from .eliminate import (LinearSystem, closed_form_aryabhata, closed_form_diophantus, combine_rows,
                        fraction_free_solve, render_rolle, rolle_solve, schoolbook_solve)
from .leastsq import (BracketTable, LsqProblem, bracket_from_normal, bracket_init, bracket_reduce,
                      bracket_reduce_all, build_normal, correlate_recover, gauss_reduce_solve, omega, reduced_forms)
from .matrixcore import (ElementaryStep, Factorization, InconsistentSystemError, ShapeError, SingularMatrixError,
                         TraceLog, back_sub, column_eliminate, forward_sub, inverse, ldu_decompose, ldu_solve,
                         mat_mul, mat_vec, residual, steps_to_factor, transpose)
from .scalar import FixedDec, MixedPrecisionError, PrecisionSpec, parse_scalar, round_to
from .tableau import Tableau, TableauRow, parse_structured, render_structured, render_text, replay_tableau
from .workbench import parse_system, render_tableau, verify_all

__version__ = "0.1.0"
