from .rational import Rational, RationalMatrix, as_rational, format_rational
from .simplex import Infeasible, LpTask, Optimal, Unbounded, lp_solve
from .eig import EIG_TOL, RANK_TOL, EigResult, SymMatrixF, psd_rank, sym_eig

__all__ = [
    "Rational", "RationalMatrix", "as_rational", "format_rational",
    "LpTask", "Optimal", "Infeasible", "Unbounded", "lp_solve",
    "SymMatrixF", "EigResult", "sym_eig", "psd_rank", "EIG_TOL", "RANK_TOL",
]
