"""Cyclotomic polynomials, their block decomposition, and closed-form
Hamming weights of Phi_{3 p2 p3}, each checked against direct expansion."""
from .closedform import TernaryParams, ValidationReport, hw_ternary
from .cyclotomic import cyclotomic, hw_oracle
from .errors import CyclohwError
from .intpoly import IntPolynomial

__version__ = "0.1.0"

__all__ = ["CyclohwError", "IntPolynomial", "TernaryParams", "ValidationReport",
           "cyclotomic", "hw_oracle", "hw_ternary", "__version__"]
