"""Dense univariate polynomials over the integers.

An :class:`IntPolynomial` stores its coefficients lowest degree first, with
no trailing zeros; the zero polynomial has no coefficients at all.  Values
are immutable.  Coefficients are Python ints, but every arithmetic result is
checked against the signed 64-bit range and a :class:`CoefficientOverflow`
is raised rather than silently carrying a huge value around.

Besides ring arithmetic the module provides the four block operators used
throughout the package, all relative to a modulus ``m``:

* ``truncate(f, s)``   keep the terms of exponent < s
* ``flip(f, m)``       reverse the length-m coefficient window
* ``rotate(f, s, m)``  cyclic shift, new[k] = old[(k + s) mod m]
* ``expand(f, s, m)``  substitute x -> x^(s mod m)
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .errors import CoefficientOverflow, DegreeExceedsModulus, InexactDivision

INT64_MAX = 2**63 - 1
INT64_MIN = -(2**63)


def _normalize(coeffs: Sequence[int]) -> tuple[int, ...]:
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    out = tuple(coeffs[:n])
    for c in out:
        if c > INT64_MAX or c < INT64_MIN:
            raise CoefficientOverflow(f"coefficient {c} outside signed 64-bit range")
    return out


class IntPolynomial:
    __slots__ = ("_coeffs", "_hash")

    def __init__(self, coeffs: Iterable[int] = ()):
        self._coeffs = _normalize([int(c) for c in coeffs])
        self._hash = None

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> IntPolynomial:
        if exponent < 0:
            raise ValueError("negative exponent")
        return cls([0] * exponent + [coeff])

    @classmethod
    def from_terms(cls, terms: dict[int, int] | Iterable[tuple[int, int]]) -> IntPolynomial:
        """Build from ``{exponent: coefficient}``; repeated exponents accumulate."""
        items = terms.items() if isinstance(terms, dict) else terms
        dense: list[int] = []
        for e, c in items:
            if e < 0:
                raise ValueError("negative exponent")
            if e >= len(dense):
                dense.extend([0] * (e + 1 - len(dense)))
            dense[e] += c
        return cls(dense)

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self._coeffs

    @property
    def degree(self) -> int | None:
        """Degree, or None for the zero polynomial."""
        return len(self._coeffs) - 1 if self._coeffs else None

    def is_zero(self) -> bool:
        return not self._coeffs

    def __getitem__(self, k: int) -> int:
        if 0 <= k < len(self._coeffs):
            return self._coeffs[k]
        return 0

    def __len__(self) -> int:
        return len(self._coeffs)

    def __iter__(self):
        return iter(self._coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, IntPolynomial):
            return self._coeffs == other._coeffs
        if isinstance(other, int):
            return self._coeffs == _normalize([other])
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._coeffs)
        return self._hash

    def __add__(self, other: IntPolynomial | int) -> IntPolynomial:
        return add(self, _coerce(other))

    __radd__ = __add__

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial([-c for c in self._coeffs])

    def __sub__(self, other: IntPolynomial | int) -> IntPolynomial:
        return add(self, -_coerce(other))

    def __rsub__(self, other: int) -> IntPolynomial:
        return add(_coerce(other), -self)

    def __mul__(self, other: IntPolynomial | int) -> IntPolynomial:
        return mul(self, _coerce(other))

    __rmul__ = __mul__

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self._coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self) -> str:
        return f"IntPolynomial({list(self._coeffs)!r})"

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for e, c in enumerate(self._coeffs):
            if not c:
                continue
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                mono = "x" if e == 1 else f"x^{e}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def _coerce(f: IntPolynomial | int) -> IntPolynomial:
    if isinstance(f, IntPolynomial):
        return f
    if isinstance(f, int):
        return IntPolynomial([f])
    raise TypeError(f"cannot use {type(f).__name__} as a polynomial")


ZERO = IntPolynomial()
ONE = IntPolynomial([1])
X = IntPolynomial([0, 1])


def add(f: IntPolynomial, g: IntPolynomial) -> IntPolynomial:
    a, b = f.coeffs, g.coeffs
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for k, c in enumerate(b):
        out[k] += c
    return IntPolynomial(out)


def mul(f: IntPolynomial, g: IntPolynomial) -> IntPolynomial:
    a, b = f.coeffs, g.coeffs
    if not a or not b:
        return ZERO
    if len(a) < len(b):
        a, b = b, a
    out = [0] * (len(a) + len(b) - 1)
    # iterate over the sparser factor's nonzeros; blocks are mostly zero
    for j, cb in enumerate(b):
        if not cb:
            continue
        for i, ca in enumerate(a):
            if ca:
                out[i + j] += ca * cb
    return IntPolynomial(out)


def divmod_poly(f: IntPolynomial, g: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial]:
    """Long division by a divisor whose leading coefficient is +1 or -1."""
    if g.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    lead = g.coeffs[-1]
    if lead not in (1, -1):
        raise ValueError("divisor must be monic up to sign")
    dg = g.degree
    rem = list(f.coeffs)
    if len(rem) <= dg:
        return ZERO, f
    quo = [0] * (len(rem) - dg)
    gc = g.coeffs
    for k in range(len(rem) - 1, dg - 1, -1):
        c = rem[k]
        if not c:
            continue
        q = c * lead  # lead is its own inverse
        quo[k - dg] = q
        base = k - dg
        for t, gt in enumerate(gc):
            if gt:
                rem[base + t] -= q * gt
    return IntPolynomial(quo), IntPolynomial(rem[:dg])


def quot_exact(f: IntPolynomial, g: IntPolynomial) -> IntPolynomial:
    q, r = divmod_poly(f, g)
    if not r.is_zero():
        raise InexactDivision(f"inexact division: remainder {r}")
    return q


def hamming_weight(f: IntPolynomial) -> int:
    """Number of nonzero coefficients."""
    return sum(1 for c in f.coeffs if c)


def truncate(f: IntPolynomial, s: int) -> IntPolynomial:
    if s < 0:
        raise ValueError("truncation length must be nonnegative")
    return IntPolynomial(f.coeffs[:s])


def _check_window(f: IntPolynomial, m: int) -> None:
    if m <= 0:
        raise ValueError("modulus must be positive")
    if len(f) > m:
        raise DegreeExceedsModulus(f"degree {f.degree} exceeds modulus {m}")


def _window(f: IntPolynomial, m: int) -> list[int]:
    return list(f.coeffs) + [0] * (m - len(f))


def flip(f: IntPolynomial, m: int) -> IntPolynomial:
    _check_window(f, m)
    return IntPolynomial(_window(f, m)[::-1])


def rotate(f: IntPolynomial, s: int, m: int) -> IntPolynomial:
    _check_window(f, m)
    s %= m
    w = _window(f, m)
    return IntPolynomial(w[s:] + w[:s])


def expand(f: IntPolynomial, s: int, m: int) -> IntPolynomial:
    if m <= 0:
        raise ValueError("modulus must be positive")
    step = s % m
    if step == 0 and len(f) > 1:
        # would collapse f to the constant f(1); never meaningful for blocks
        raise ValueError(f"degenerate expansion: rem({s}, {m}) = 0")
    out = [0] * ((len(f) - 1) * step + 1) if f.coeffs else []
    for e, c in enumerate(f.coeffs):
        out[e * step] = c
    return IntPolynomial(out)


def rem_cyclic(f: IntPolynomial, m: int) -> IntPolynomial:
    """Remainder modulo x^m - 1."""
    if m <= 0:
        raise ValueError("modulus must be positive")
    out = [0] * m
    for e, c in enumerate(f.coeffs):
        out[e % m] += c
    return IntPolynomial(out)
