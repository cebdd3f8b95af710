"""Cyclotomic and inverse cyclotomic polynomials, plus the brute-force oracle.

Small polynomials (Phi_n for moderate n, Psi_m, blocks) are exact
:class:`IntPolynomial` values.  The oracle expands Phi_{mp} with a numpy
int64 kernel, since for ternary n the degree runs to 10^5 or more::

    Phi_{mp}(x) = Phi_m(x^p) / Phi_m(x) = -Phi_m(x^p) * Psi_m(x) / (1 - x^m)

The product is a handful of shifted copies of Psi_m, and dividing by
1 - x^m is a running sum along each residue class mod m.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt

import numpy as np

from .errors import CoefficientOverflow, InexactDivision, InvalidParameters, OracleInfeasible
from .intpoly import INT64_MAX, IntPolynomial, quot_exact

DEFAULT_DEGREE_CAP = 5 * 10**7


@dataclass(frozen=True)
class Factorization:
    n: int
    prime_powers: tuple[tuple[int, int], ...]

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.prime_powers)

    @property
    def squarefree(self) -> bool:
        return all(e == 1 for _, e in self.prime_powers)

    def divisors(self) -> list[int]:
        divs = [1]
        for p, e in self.prime_powers:
            divs = [d * p**k for d in divs for k in range(e + 1)]
        return sorted(divs)


@lru_cache(maxsize=4096)
def factorize(n: int) -> Factorization:
    """Trial division with a 2-3-5 wheel."""
    if n < 1:
        raise InvalidParameters(f"cannot factor {n}")
    pp = []
    rest = n
    for p in (2, 3, 5):
        e = 0
        while rest % p == 0:
            rest //= p
            e += 1
        if e:
            pp.append((p, e))
    gaps = (4, 2, 4, 2, 4, 6, 2, 6)
    d, k = 7, 0
    while d * d <= rest:
        e = 0
        while rest % d == 0:
            rest //= d
            e += 1
        if e:
            pp.append((d, e))
        d += gaps[k]
        k = (k + 1) % 8
    if rest > 1:
        pp.append((rest, 1))
    return Factorization(n, tuple(pp))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5):
        if n % p == 0:
            return n == p
    limit = isqrt(n)
    gaps = (4, 2, 4, 2, 4, 6, 2, 6)
    d, k = 7, 0
    while d <= limit:
        if n % d == 0:
            return False
        d += gaps[k]
        k = (k + 1) % 8
    return True


def mobius(n: int) -> int:
    f = factorize(n)
    if not f.squarefree:
        return 0
    return -1 if len(f.prime_powers) % 2 else 1


def euler_phi(n: int) -> int:
    result = n
    for p, _ in factorize(n).prime_powers:
        result = result // p * (p - 1)
    return result


def is_squarefree_odd(n: int) -> bool:
    return n >= 1 and n % 2 == 1 and factorize(n).squarefree


@lru_cache(maxsize=1024)
def cyclotomic(n: int) -> IntPolynomial:
    """Phi_n by dividing x^n - 1 by Phi_d for every proper divisor d of n."""
    if n < 1:
        raise InvalidParameters(f"cyclotomic index must be positive, got {n}")
    poly = IntPolynomial.monomial(n) - 1
    for d in factorize(n).divisors():
        if d < n:
            poly = quot_exact(poly, cyclotomic(d))
    return poly


@lru_cache(maxsize=1024)
def inverse_cyclotomic(m: int) -> IntPolynomial:
    """Psi_m = (x^m - 1) / Phi_m."""
    return quot_exact(IntPolynomial.monomial(m) - 1, cyclotomic(m))


def clear_caches() -> None:
    cyclotomic.cache_clear()
    inverse_cyclotomic.cache_clear()
    factorize.cache_clear()


def _check_binary_args(m: int, p: int) -> None:
    if m < 1:
        raise InvalidParameters(f"m must be positive, got {m}")
    if not is_prime(p):
        raise InvalidParameters(f"{p} is not prime")
    if m % p == 0:
        raise InvalidParameters(f"{p} divides {m}")


def expand_mp(m: int, p: int, *, phi_m: IntPolynomial | None = None,
              cap: int | None = DEFAULT_DEGREE_CAP) -> np.ndarray:
    """Coefficients of Phi_{mp} as an int64 array (index = exponent).

    ``phi_m`` may be supplied when Phi_m itself came out of a previous
    expansion.  Raises :class:`OracleInfeasible` if the degree exceeds ``cap``
    (``None`` disables the cap).
    """
    _check_binary_args(m, p)
    if phi_m is None:
        phi_m = cyclotomic(m)
    phi_deg = phi_m.degree
    degree = phi_deg * (p - 1)
    if cap is not None and degree > cap:
        raise OracleInfeasible(degree, cap)
    psi = quot_exact(IntPolynomial.monomial(m) - 1, phi_m)

    # running sums along residue classes are bounded by this; refuse if it
    # could leave int64
    bound = sum(map(abs, phi_m.coeffs)) * sum(map(abs, psi.coeffs)) * (degree // m + 2)
    if bound > INT64_MAX:
        raise CoefficientOverflow(f"expansion of Phi_{m * p} may overflow int64")

    span = phi_deg * p + len(psi)
    length = -(-span // m) * m
    prod = np.zeros(length, dtype=np.int64)
    psi_arr = np.asarray(psi.coeffs, dtype=np.int64)
    for s, a in enumerate(phi_m.coeffs):
        if a:
            prod[s * p:s * p + len(psi_arr)] += a * psi_arr
    series = -np.cumsum(prod.reshape(-1, m), axis=0).ravel()
    if series[degree + 1:].any():
        raise InexactDivision(f"Phi_{m}(x^{p}) not divisible by Phi_{m}")
    return series[:degree + 1]


def binary_expand(m: int, p: int, *, phi_m: IntPolynomial | None = None,
                  cap: int | None = DEFAULT_DEGREE_CAP) -> IntPolynomial:
    """Phi_{mp} as an exact polynomial (see :func:`expand_mp`)."""
    return IntPolynomial(expand_mp(m, p, phi_m=phi_m, cap=cap).tolist())


def ternary_degree(p1: int, p2: int, p3: int) -> int:
    return (p1 - 1) * (p2 - 1) * (p3 - 1)


def hw_oracle(p1: int, p2: int, p3: int, *, cap: int | None = DEFAULT_DEGREE_CAP) -> int:
    """Hamming weight of Phi_{p1 p2 p3} by full expansion."""
    if not (2 < p1 < p2 < p3) or not all(is_prime(q) for q in (p1, p2, p3)):
        raise InvalidParameters(f"need odd primes p1 < p2 < p3, got {(p1, p2, p3)}")
    degree = ternary_degree(p1, p2, p3)
    if cap is not None and degree > cap:
        raise OracleInfeasible(degree, cap)
    phi_m = binary_expand(p1, p2)
    return int(np.count_nonzero(expand_mp(p1 * p2, p3, phi_m=phi_m, cap=cap)))


def hw_mp_oracle(m: int, p: int, *, cap: int | None = DEFAULT_DEGREE_CAP) -> int:
    """Hamming weight of Phi_{mp} by full expansion, for any m coprime to p."""
    return int(np.count_nonzero(expand_mp(m, p, cap=cap)))


def coprime(a: int, b: int) -> bool:
    return gcd(a, b) == 1
