"""Block decomposition of Phi_{mp}.

Phi_{mp} splits into rows of width p, and each row into columns of width m::

    Phi_{mp} = sum_i x^(i p) sum_j f_{m,p,i,j} x^(j m),   deg f_{m,p,i,j} < m

with 0 <= i < phi(m) and 0 <= j <= q = p // m.  Blocks can be produced two
ways: by formula from Phi_m and Psi_m alone (:func:`block`, :func:`block_coeff`)
or by cutting up a full expansion (:func:`slice_blocks`).  The sliced
version is the definition; :func:`partition` builds both and insists they
agree.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .cyclotomic import (DEFAULT_DEGREE_CAP, cyclotomic, euler_phi, expand_mp,
                         inverse_cyclotomic, is_prime, is_squarefree_odd)
from .errors import InvalidParameters, PartitionMismatch
from .intpoly import IntPolynomial, expand, flip, hamming_weight, rem_cyclic, rotate, truncate


def validate_mp(m: int, p: int) -> None:
    if not is_squarefree_odd(m):
        raise InvalidParameters(f"m={m} is not a squarefree odd integer")
    if not is_prime(p):
        raise InvalidParameters(f"p={p} is not prime")
    if p <= m:
        raise InvalidParameters(f"need p > m, got p={p}, m={m}")


@dataclass(frozen=True)
class BlockKey:
    m: int
    p: int
    i: int
    j: int = 0

    def __post_init__(self):
        validate_mp(self.m, self.p)
        if not 0 <= self.i < euler_phi(self.m):
            raise InvalidParameters(f"row i={self.i} outside [0, {euler_phi(self.m) - 1}]")
        if not 0 <= self.j <= self.q:
            raise InvalidParameters(f"column j={self.j} outside [0, {self.q}]")

    @property
    def r(self) -> int:
        return self.p % self.m

    @property
    def q(self) -> int:
        return self.p // self.m


@lru_cache(maxsize=8192)
def _repeat_block(m: int, r: int, i: int) -> IntPolynomial:
    # depends on p only through r (which is why invariance holds)
    inner = expand(truncate(cyclotomic(m), i + 1), r, m)
    return -rotate(rem_cyclic(inverse_cyclotomic(m) * inner, m), i * r, m)


def block(key: BlockKey) -> IntPolynomial:
    """f_{m,p,i,j} from the operator formula; j = q gives the truncated block."""
    f = _repeat_block(key.m, key.r, key.i)
    if key.j == key.q:
        return truncate(f, key.r)
    return f


def block_coeff(key: BlockKey, k: int) -> int:
    """Coefficient of x^k in f_{m,p,i,0}, summed directly from Phi_m and Psi_m."""
    m, r, i = key.m, key.r, key.i
    if not 0 <= k < m:
        raise InvalidParameters(f"exponent k={k} outside [0, {m - 1}]")
    a = cyclotomic(m)
    b = inverse_cyclotomic(m)
    return -sum(a[s] * b[(k + (i - s) * r) % m] for s in range(i + 1))


def slice_blocks(m: int, p: int, coeffs: np.ndarray) -> np.ndarray:
    """Cut an expansion of Phi_{mp} into an array indexed [i, j, k].

    Column j = q holds the r-term tail of each row, zero-padded to width m.
    """
    phi = euler_phi(m)
    q, r = divmod(p, m)
    padded = np.zeros(phi * p, dtype=np.int64)
    padded[:len(coeffs)] = coeffs
    rows = padded.reshape(phi, p)
    out = np.zeros((phi, q + 1, m), dtype=np.int64)
    out[:, :q, :] = rows[:, :q * m].reshape(phi, q, m)
    out[:, q, :r] = rows[:, q * m:]
    return out


@dataclass(frozen=True)
class BlockTable:
    m: int
    p: int
    rows: tuple[tuple[IntPolynomial, IntPolynomial], ...]
    hw_full: tuple[int, ...] = field(init=False)
    hw_trunc: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "hw_full", tuple(hamming_weight(f) for f, _ in self.rows))
        object.__setattr__(self, "hw_trunc", tuple(hamming_weight(t) for _, t in self.rows))

    @property
    def r(self) -> int:
        return self.p % self.m

    @property
    def q(self) -> int:
        return self.p // self.m

    def hamming_weight(self) -> int:
        """hw(Phi_{mp}) recovered from the table."""
        return self.q * sum(self.hw_full) + sum(self.hw_trunc)


def formula_table(m: int, p: int) -> BlockTable:
    """Block table from the formula path only (no expansion)."""
    validate_mp(m, p)
    r = p % m
    rows = []
    for i in range(euler_phi(m)):
        f = _repeat_block(m, r, i)
        rows.append((f, truncate(f, r)))
    return BlockTable(m, p, tuple(rows))


def partition(m: int, p: int, *, coeffs: np.ndarray | None = None,
              cap: int | None = DEFAULT_DEGREE_CAP) -> BlockTable:
    """Block table of Phi_{mp}, reconciled against the sliced expansion.

    Raises :class:`PartitionMismatch` naming the first (i, j) at which the
    formula block and the slice differ.
    """
    table = formula_table(m, p)
    if coeffs is None:
        coeffs = expand_mp(m, p, cap=cap)
    sliced = slice_blocks(m, p, coeffs)
    q = table.q
    for i, (full, trunc) in enumerate(table.rows):
        want = np.zeros(m, dtype=np.int64)
        want[:len(full)] = full.coeffs
        bad = np.nonzero((sliced[i, :q, :] != want).any(axis=1))[0]
        if len(bad):
            raise PartitionMismatch(m, p, i, int(bad[0]))
        want_t = np.zeros(m, dtype=np.int64)
        want_t[:len(trunc)] = trunc.coeffs
        if (sliced[i, q, :] != want_t).any():
            raise PartitionMismatch(m, p, i, q)
    return table


def reassemble(table: BlockTable) -> IntPolynomial:
    """Sum of f_{m,p,i,j} x^(ip + jm) over the whole table."""
    m, p, q = table.m, table.p, table.q
    terms: dict[int, int] = {}
    for i, (full, trunc) in enumerate(table.rows):
        for j in range(q + 1):
            blk = trunc if j == q else full
            base = i * p + j * m
            for k, c in enumerate(blk.coeffs):
                if c:
                    terms[base + k] = terms.get(base + k, 0) + c
    return IntPolynomial.from_terms(terms)


@dataclass
class StructureReport:
    """Outcome of a structure-theorem check; failures are data, not exceptions."""
    name: str
    params: dict
    comparable: bool = True
    clauses: dict[str, bool] = field(default_factory=dict)
    witnesses: dict[str, tuple] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.comparable and all(self.clauses.values())

    @property
    def status(self) -> str:
        if not self.comparable:
            return "not comparable"
        return "pass" if self.passed else "fail"


def _as_poly(row: np.ndarray) -> IntPolynomial:
    return IntPolynomial(row.tolist())


def check_intra(m: int, p: int, *, coeffs: np.ndarray | None = None,
                cap: int | None = DEFAULT_DEGREE_CAP) -> StructureReport:
    """Repetition, Truncation and Symmetry, checked on the sliced expansion."""
    validate_mp(m, p)
    if coeffs is None:
        coeffs = expand_mp(m, p, cap=cap)
    sl = slice_blocks(m, p, coeffs)
    phi = euler_phi(m)
    q, r = divmod(p, m)
    report = StructureReport("intra", {"m": m, "p": p})

    rep_bad = [(i, j) for i in range(phi) for j in range(1, q)
               if (sl[i, j] != sl[i, 0]).any()]
    report.clauses["repetition"] = not rep_bad
    if rep_bad:
        report.witnesses["repetition"] = rep_bad[0]

    trunc_bad = [i for i in range(phi)
                 if (sl[i, q, :r] != sl[i, 0, :r]).any() or sl[i, q, r:].any()]
    report.clauses["truncation"] = not trunc_bad
    if trunc_bad:
        report.witnesses["truncation"] = (trunc_bad[0],)

    sym_bad = []
    for i in range(phi):
        image = rotate(flip(_as_poly(sl[i, 0]), m), phi - 1 - r, m)
        if image != _as_poly(sl[phi - 1 - i, 0]):
            sym_bad.append(i)
    report.clauses["symmetry"] = not sym_bad
    if sym_bad:
        report.witnesses["symmetry"] = (sym_bad[0],)
    return report


def check_inter(m: int, p: int, p_other: int, *,
                coeffs: np.ndarray | None = None,
                coeffs_other: np.ndarray | None = None,
                cap: int | None = DEFAULT_DEGREE_CAP) -> StructureReport:
    """Invariance (p' = p mod m) or Semi-Invariance (p' = -p mod m)."""
    validate_mp(m, p)
    validate_mp(m, p_other)
    report = StructureReport("inter", {"m": m, "p": p, "p_other": p_other})
    same = (p_other - p) % m == 0
    opposite = (p_other + p) % m == 0
    if not (same or opposite):
        report.comparable = False
        return report
    if coeffs is None:
        coeffs = expand_mp(m, p, cap=cap)
    if coeffs_other is None:
        coeffs_other = expand_mp(m, p_other, cap=cap)
    phi = euler_phi(m)
    sl = slice_blocks(m, p, coeffs)
    sl_other = slice_blocks(m, p_other, coeffs_other)
    bad = []
    for i in range(phi):
        mine = _as_poly(sl[i, 0])
        theirs = _as_poly(sl_other[i, 0])
        expected = mine if same else -rotate(flip(mine, m), phi - 1, m)
        if theirs != expected:
            bad.append(i)
    clause = "invariance" if same else "semi_invariance"
    report.clauses[clause] = not bad
    if bad:
        report.witnesses[clause] = (bad[0],)
    return report
