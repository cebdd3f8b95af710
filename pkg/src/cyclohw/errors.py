"""Exception hierarchy shared across the package."""


class CyclohwError(Exception):
    """Base class for all errors raised by cyclohw."""


class InvalidParameters(CyclohwError, ValueError):
    """Input outside the domain of an operation (non-prime, bad residue, ...)."""


class InexactDivision(CyclohwError, ArithmeticError):
    pass


class DegreeExceedsModulus(CyclohwError, ValueError):
    pass


class CoefficientOverflow(CyclohwError, OverflowError):
    """A coefficient left the signed 64-bit range."""


class FormulaNotApplicable(CyclohwError, ValueError):
    pass


class OracleInfeasible(CyclohwError):
    """The brute-force expansion would exceed the configured degree cap."""

    def __init__(self, degree: int, cap: int):
        super().__init__(f"oracle infeasible: degree {degree} exceeds cap {cap}")
        self.degree = degree
        self.cap = cap


class PartitionMismatch(CyclohwError, AssertionError):
    """Formula-built block disagrees with the block sliced out of the expansion."""

    def __init__(self, m: int, p: int, i: int, j: int):
        super().__init__(f"partition mismatch for (m={m}, p={p}) at block (i={i}, j={j})")
        self.m, self.p, self.i, self.j = m, p, i, j


class LawViolation(CyclohwError, AssertionError):
    """An identity that must hold by construction failed on real data."""
