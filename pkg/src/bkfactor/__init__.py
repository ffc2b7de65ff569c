"""Factorization and generalized invariants of bivariate linear partial differential operators."""

from .expr import Verdict, canonical, diff, evaluate, is_zero, parse, substitute, to_text, x, y, zero_test
from .operator import Lpdo, apply, compose, gauge_conjugate, principal_symbol, transpose
from .parsing import ParseError, parse_expression, parse_operator

__all__ = [
    "Lpdo",
    "ParseError",
    "Verdict",
    "apply",
    "canonical",
    "compose",
    "diff",
    "evaluate",
    "gauge_conjugate",
    "is_zero",
    "parse",
    "parse_expression",
    "parse_operator",
    "principal_symbol",
    "substitute",
    "to_text",
    "transpose",
    "x",
    "y",
    "zero_test",
]

__version__ = "0.1.0"
