"""Compact (tabular) elimination methods of the professional computers."""
from ._common import NotPositiveDefiniteError
from .cholesky import (CholeskyFactors, IrrationalRootError, SquaredCholesky, cholesky_factor,
                       cholesky_normal_solve, cholesky_solve, cholesky_squared)
from .crout import crout_solve
from .doolittle import (ABS, RefinementDivergedError, RefinementReport, RefinementStep, doolittle_back,
                        doolittle_forward, doolittle_refine, doolittle_solve)
from .dwyer import dwyer_single_division
from .satterthwaite import TripleFactorization, improve_inverse, satterthwaite_factor, satterthwaite_solve

__all__ = [
    "NotPositiveDefiniteError", "IrrationalRootError",
    "CholeskyFactors", "SquaredCholesky", "cholesky_factor", "cholesky_normal_solve", "cholesky_solve",
    "cholesky_squared",
    "crout_solve",
    "ABS", "doolittle_forward", "doolittle_back", "doolittle_solve", "doolittle_refine",
    "RefinementStep", "RefinementReport", "RefinementDivergedError",
    "dwyer_single_division",
    "TripleFactorization", "satterthwaite_factor", "satterthwaite_solve", "improve_inverse",
]
