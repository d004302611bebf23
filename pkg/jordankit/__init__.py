"""
Exact Jordan chains, root functions and ODE solutions for rational
matrix-valued functions.
"""

__version__ = "0.1.0"

from .algebra import GaussianRational, Poly, RatFun
from .jordan import (
    JordanChain,
    RootFunction,
    build_root_function,
    canonical_chain,
    extend_chain_greedy,
    max_partial_multiplicity,
    maximal_chain,
    verify_zero_order,
)
from .parser import parse_ratfun
from .ratmat import MatPoly, RatMat, ScalarMat, determinant, local_smith
from .spectra import char_function, classify_point, zero_pole_report

__all__ = [
    "GaussianRational",
    "JordanChain",
    "MatPoly",
    "Poly",
    "RatFun",
    "RatMat",
    "RootFunction",
    "ScalarMat",
    "__version__",
    "build_root_function",
    "canonical_chain",
    "char_function",
    "classify_point",
    "determinant",
    "extend_chain_greedy",
    "local_smith",
    "max_partial_multiplicity",
    "maximal_chain",
    "parse_ratfun",
    "verify_zero_order",
    "zero_pole_report",
]
