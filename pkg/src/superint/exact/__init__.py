"""Exact arithmetic: Gaussian rationals, Laurent polynomials, rational
functions and differential operators."""

from . import symbols
from .algebraic import AlgebraicRelation, reduce_all
from .diffop import (
    DiffOp, angular_momentum, anticommutator, commutator, hamiltonian, momentum, symmetrize,
)
from .gaussrat import I, GaussRat
from .parse import ParseError, parse_number, parse_poly, parse_rational
from .poly import ExactPoly, divide_exact, sym
from .ratfunc import RatFunc, subs_into
from .symbols import UnknownSymbolError, declare_function

__all__ = [
    "AlgebraicRelation", "DiffOp", "ExactPoly", "GaussRat", "I", "ParseError", "RatFunc",
    "UnknownSymbolError", "angular_momentum", "anticommutator", "commutator", "declare_function",
    "divide_exact", "hamiltonian", "momentum", "parse_number", "parse_poly", "parse_rational",
    "reduce_all", "subs_into", "sym", "symbols", "symmetrize",
]
