from math import gcd

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cyclohw.cyclotomic import (binary_expand, cyclotomic, euler_phi, expand_mp, factorize,
                                hw_mp_oracle, hw_oracle, inverse_cyclotomic, is_prime,
                                is_squarefree_odd, mobius, ternary_degree)
from cyclohw.errors import InvalidParameters, OracleInfeasible
from cyclohw.intpoly import IntPolynomial


def sieve(n):
    flags = [True] * (n + 1)
    flags[0] = flags[1] = False
    for k in range(2, int(n**0.5) + 1):
        if flags[k]:
            flags[k * k::k] = [False] * len(flags[k * k::k])
    return flags


def series_product_formula(n):
    """Phi_n = prod_{d | n} (1 - x^d)^mu(n/d) for n > 1, as a truncated power series."""
    terms = euler_phi(n) + 1
    out = [1] + [0] * (terms - 1)
    for d in range(1, n + 1):
        if n % d:
            continue
        mu = mobius(n // d)
        if mu == 1:
            for k in range(terms - 1, d - 1, -1):
                out[k] -= out[k - d]
        elif mu == -1:
            # divide by 1 - x^d: running sum with stride d
            for k in range(d, terms):
                out[k] += out[k - d]
    return out


def test_is_prime_matches_sieve():
    flags = sieve(5000)
    assert [n for n in range(5001) if is_prime(n)] == [n for n in range(5001) if flags[n]]


def test_phi_and_mobius_by_definition():
    for n in range(1, 300):
        assert euler_phi(n) == sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)
        assert sum(mobius(d) for d in range(1, n + 1) if n % d == 0) == (1 if n == 1 else 0)


def test_factorize():
    f = factorize(2 * 3 * 3 * 35)
    assert f.prime_powers == ((2, 1), (3, 2), (5, 1), (7, 1))
    assert not f.squarefree
    assert factorize(105).divisors() == [1, 3, 5, 7, 15, 21, 35, 105]
    assert is_squarefree_odd(105)
    assert not is_squarefree_odd(45)
    assert not is_squarefree_odd(30)


def test_small_cyclotomics():
    assert cyclotomic(1) == IntPolynomial([-1, 1])
    assert cyclotomic(3) == IntPolynomial([1, 1, 1])
    assert cyclotomic(15) == IntPolynomial([1, -1, 0, 1, -1, 1, 0, -1, 1])
    with pytest.raises(InvalidParameters):
        cyclotomic(0)


def test_phi105_has_a_minus_two():
    assert -2 in cyclotomic(105).coeffs


@pytest.mark.parametrize("n", range(2, 201))
def test_cyclotomic_matches_product_formula(n):
    phi = cyclotomic(n)
    assert phi.degree == euler_phi(n)
    assert list(phi.coeffs) == series_product_formula(n)
    assert phi.coeffs == phi.coeffs[::-1]


def test_glossary_inverse_cyclotomic():
    for p2 in (5, 7, 11, 13):
        psi = inverse_cyclotomic(3 * p2)
        expected = IntPolynomial.from_terms({0: -1, 1: -1, 2: -1, p2: 1, p2 + 1: 1, p2 + 2: 1})
        assert psi == expected


@pytest.mark.parametrize("m,p", [(3, 5), (3, 7), (15, 7), (15, 17), (21, 5), (21, 23),
                                 (35, 3), (33, 101), (105, 11)])
def test_expand_mp_matches_exact_division(m, p):
    assert IntPolynomial(expand_mp(m, p).tolist()) == cyclotomic(m * p)


@given(st.sampled_from([3, 5, 7, 11, 13]), st.sampled_from([17, 19, 23, 29, 31, 37]))
def test_binary_expand_roundtrip(p1, p2):
    f = binary_expand(p1, p2)
    assert f == cyclotomic(p1 * p2)
    # binary cyclotomic coefficients are in {-1, 0, 1}
    assert set(f.coeffs) <= {-1, 0, 1}


def test_ternary_expansion_is_palindromic():
    coeffs = expand_mp(21, 61, phi_m=binary_expand(3, 7))
    assert len(coeffs) == ternary_degree(3, 7, 61) + 1
    assert np.array_equal(coeffs, coeffs[::-1])


def test_oracle_cap():
    with pytest.raises(OracleInfeasible, match="degree 47892698448"):
        hw_oracle(3, 283, 84916133)
    with pytest.raises(OracleInfeasible):
        hw_mp_oracle(21, 23, cap=100)
    assert hw_oracle(3, 7, 23, cap=None) == 121


def test_oracle_arguments():
    with pytest.raises(InvalidParameters):
        hw_oracle(3, 7, 21)
    with pytest.raises(InvalidParameters):
        expand_mp(21, 7)
