"""Subset intersection matrices and the small-block reduction of their
Smith groups.

The pipeline: conjugating by the inclusion-basis matrix P turns any integer
combination of the intersection matrices into a block-triangular matrix
whose blocks are multiples of the standard-inclusion matrices W_{i,j};
those blocks are simultaneously diagonalizable by a family of unimodular
matrices E_s, leaving small square blocks M_s whose diagonal forms, repeated
with explicit multiplicities, assemble the Smith group of the full matrix.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from math import comb

from .exact import (AbelianGroup, ConstructionError, ExactError, IntMatrix,
                    group_from_diagonal, is_unimodular, smith_normal_form,
                    unimodular_completion)
from .subsets import STANDARD, binomial, enumerate_subsets, mu


class ParameterError(ExactError):
    """Scheme parameters outside the supported range."""


@dataclass(frozen=True)
class SchemeParams:
    """Parameters (n, kr, kc, ell): rows are kr-subsets of {1..n}, columns
    kc-subsets, incidence means intersection of size exactly ell."""

    n: int
    kr: int
    kc: int
    ell: int

    def __post_init__(self):
        if not (0 <= self.ell <= self.kr <= self.kc <= self.n):
            raise ParameterError(
                f"need 0 <= ell <= kr <= kc <= n, got {self}")

    @property
    def square(self) -> bool:
        return self.kr == self.kc


def degree(n: int, k: int, ell: int) -> int:
    """Common row sum of the square intersection matrix: C(n-k,k-ell)*C(k,ell)."""
    if not (0 <= ell <= k <= n):
        raise ParameterError("need 0 <= ell <= k <= n")
    return comb(n - k, k - ell) * comb(k, ell)


def unit_coeffs(p: SchemeParams) -> tuple[int, ...]:
    """Coefficient vector selecting the single matrix A_{n,kr,kc,ell}."""
    out = [0] * (p.kr + 1)
    out[p.ell] = 1
    return tuple(out)


def _masks(subsets) -> list[int]:
    return [sum(1 << (e - 1) for e in s) for s in subsets]


def intersection_matrix(p: SchemeParams) -> IntMatrix:
    """0/1 matrix with entry 1 iff |A & B| == ell, rows kr-subsets, cols
    kc-subsets, both in lexicographic order."""
    rows = enumerate_subsets(p.n, p.kr)
    cols = enumerate_subsets(p.n, p.kc)
    rmask = _masks(rows)
    cmask = _masks(cols)
    ell = p.ell
    data = [[1 if (a & b).bit_count() == ell else 0 for b in cmask]
            for a in rmask]
    return IntMatrix(data, row_labels=rows, col_labels=cols)


def scheme_element_matrix(p: SchemeParams, coeffs=None, lam: int = 0) -> IntMatrix:
    """Dense matrix of sum_l b_l A_{n,kr,kc,l} - lam*I."""
    coeffs = _check_coeffs(p, coeffs, lam)
    rows = enumerate_subsets(p.n, p.kr)
    cols = enumerate_subsets(p.n, p.kc)
    rmask = _masks(rows)
    cmask = _masks(cols)
    data = [[coeffs[(a & b).bit_count()] for b in cmask] for a in rmask]
    if lam:
        for i in range(len(rows)):
            data[i][i] -= lam
    return IntMatrix(data, row_labels=rows, col_labels=cols)


def bier_p(n: int, k: int) -> IntMatrix:
    """Inclusion matrix of standard (<= k)-subsets into unrestricted
    k-subsets: rows are the k-subsets, columns the standard subsets of size
    at most k, with a 1 where the column subset is contained in the row.
    Square and unimodular once n >= 2k - 1."""
    if not 0 <= k <= n:
        raise ParameterError("need 0 <= k <= n")
    rows = enumerate_subsets(n, k)
    cols = enumerate_subsets(n, k, STANDARD, up_to=True)
    rmask = _masks(rows)
    cmask = _masks(cols)
    data = [[1 if b & a == b else 0 for b in cmask] for a in rmask]
    return IntMatrix(data, row_labels=rows, col_labels=cols)


def w_matrix(n: int, i: int, j: int) -> IntMatrix:
    """Inclusion matrix of standard i-subsets into standard j-subsets.

    The identity for i == j, the zero matrix for i > j.
    """
    if i < 0 or j < 0:
        raise ParameterError("need i, j >= 0")
    rows = enumerate_subsets(n, i, STANDARD)
    cols = enumerate_subsets(n, j, STANDARD)
    if i > j:
        return IntMatrix([[0] * len(cols) for _ in rows],
                         row_labels=rows, col_labels=cols, cols=len(cols))
    rmask = _masks(rows)
    cmask = _masks(cols)
    data = [[1 if a & b == a else 0 for b in cmask] for a in rmask]
    return IntMatrix(data, row_labels=rows, col_labels=cols, cols=len(cols))


def c_coeff(i: int, j: int, p: SchemeParams) -> int:
    """C(kr-i, ell-i) * C(n-kr-j+i, kc-ell-j+i)."""
    return (binomial(p.kr - i, p.ell - i)
            * binomial(p.n - p.kr - j + i, p.kc - p.ell - j + i))


def f_coeff(i: int, j: int, p: SchemeParams) -> int:
    """Alternating-sum transform of c_coeff: the block coefficient of W_{i,j}
    in the conjugated triangular form."""
    return sum((-1) ** (i + v) * comb(i, v) * c_coeff(v, j, p)
               for v in range(i + 1))


def _check_d_range(n: int, i: int, j: int) -> None:
    if not (0 <= i <= j and 3 * j <= n + 1):
        raise ParameterError(
            f"diagonal form of W_{{{i},{j}}} needs 0 <= i <= j <= (n+1)/3, "
            f"got n={n}, i={i}, j={j}")


def d_diag(n: int, i: int, j: int) -> list[tuple[int, int]]:
    """Diagonal entries of the diagonal form of W_{i,j} as (entry, multiplicity):
    C(j-s, i-s) with multiplicity mu_s - mu_{s-1} for s = 0..i, and zeros
    padding out the rectangular mu_i x mu_j shape."""
    _check_d_range(n, i, j)
    out = []
    prev = 0
    for s in range(i + 1):
        ms = mu(n, s)
        out.append((binomial(j - s, i - s), ms - prev))
        prev = ms
    zeros = mu(n, j) - mu(n, i)
    out.append((0, zeros))
    return out


def d_prime_entries(n: int, i: int, j: int) -> list[int]:
    """Flat length-mu_i diagonal of the square form D'_{i,j} (no zero columns)."""
    _check_d_range(n, i, j)
    out = []
    prev = 0
    for s in range(i + 1):
        ms = mu(n, s)
        out.extend([binomial(j - s, i - s)] * (ms - prev))
        prev = ms
    return out


def d_matrix(n: int, i: int, j: int) -> IntMatrix:
    """The mu_i x mu_j rectangular diagonal matrix D_{i,j}."""
    return IntMatrix.diagonal(d_prime_entries(n, i, j), mu(n, i), mu(n, j))


def d_product(n: int, i: int, j: int) -> int:
    """prod C(j-s, i-s)^(mu_s - mu_{s-1}): the divisor bound for the index
    of W_{i,j}."""
    out = 1
    prev = 0
    for s in range(i + 1):
        ms = mu(n, s)
        out *= binomial(j - s, i - s) ** (ms - prev)
        prev = ms
    return out


# ---------------------------------------------------------------------------
# The unimodular E family diagonalizing all W blocks at once

RECURSIVE = "recursive"
SUPERSTANDARD = "superstandard"

_E_CACHE: dict[tuple[int, str], list[IntMatrix]] = {}
_E_LOCK = threading.Lock()


def _extend_recursive(n: int, es: list[IntMatrix], k_max: int) -> None:
    while len(es) <= k_max:
        s = len(es) - 1
        ew = es[s] @ w_matrix(n, s, s + 1)
        dp = d_prime_entries(n, s, s + 1)
        rows = []
        for t, row in enumerate(ew.data):
            d = dp[t]
            new = []
            for v in row:
                q, r = divmod(v, d)
                if r:
                    raise ConstructionError(
                        f"row scaling of E_{s} W_{{{s},{s + 1}}} is not exact "
                        f"at n={n}; the diagonalization guarantee is violated")
                new.append(q)
            rows.append(new)
        eprime = IntMatrix(rows) if rows else IntMatrix.zeros(0, mu(n, s + 1))
        es.append(unimodular_completion(eprime))


def _superstandard_family(n: int, k_max: int) -> list[IntMatrix]:
    from . import superstandard  # local import; superstandard builds on scheme

    es = []
    for s in range(k_max + 1):
        ps = superstandard.p_tilde(n, s, s)
        size = mu(n, s)
        if ps.shape() != (size, size):
            raise ConstructionError(
                f"super-standard basis matrix for n={n}, s={s} is "
                f"{ps.rows}x{ps.cols}, expected {size}x{size}")
        if not is_unimodular(ps):
            raise ConstructionError(
                f"super-standard basis matrix for n={n}, s={s} is not "
                "unimodular; the conjectured construction fails here")
        es.append(ps)
    for s in range(k_max):
        if es[s] @ w_matrix(n, s, s + 1) != d_matrix(n, s, s + 1) @ es[s + 1]:
            raise ConstructionError(
                f"super-standard family breaks the diagonalization identity "
                f"at n={n}, s={s}")
    return es


def e_matrices(n: int, k_max: int, family: str = RECURSIVE) -> list[IntMatrix]:
    """The unimodular mu_s x mu_s matrices E_0..E_{k_max} with
    E_i W_{i,j} = D_{i,j} E_j.

    family "recursive" builds them by exact row scaling plus unimodular
    completion; family "superstandard" takes the super-standard inclusion
    matrices instead and validates them (they are only conjecturally
    unimodular).  Results are cached per (n, family).
    """
    if k_max < 0:
        raise ParameterError("k_max must be nonnegative")
    if 3 * k_max > n + 1:
        raise ParameterError(
            f"the E construction needs k_max <= (n+1)/3, got n={n}, k_max={k_max}")
    if family not in (RECURSIVE, SUPERSTANDARD):
        raise ParameterError(f"unknown E family {family!r}")
    with _E_LOCK:
        es = _E_CACHE.setdefault((n, family), [IntMatrix([[1]])])
        if family == RECURSIVE:
            _extend_recursive(n, es, k_max)
        elif len(es) <= k_max:
            _E_CACHE[(n, family)] = es = _superstandard_family(n, k_max)
        return list(es[:k_max + 1])


def triangular_check(p: SchemeParams) -> bool:
    """Exact check of the block-triangularization: A P_kc == P_kr U with U
    assembled from f_coeff(i, j) * W_{i,j} blocks."""
    a = intersection_matrix(p)
    pr = bier_p(p.n, p.kr)
    pc = bier_p(p.n, p.kc)
    blocks_rows = []
    for i in range(p.kr + 1):
        row_blocks = [w_matrix(p.n, i, j).scale(f_coeff(i, j, p))
                      for j in range(p.kc + 1)]
        blocks_rows.extend([v for b in row_blocks for v in b.data[r]]
                           for r in range(mu(p.n, i)))
    u = IntMatrix(blocks_rows) if blocks_rows else IntMatrix.zeros(0, pc.cols)
    return a @ pc == pr @ u


# ---------------------------------------------------------------------------
# The M_s blocks and Smith group assembly


@dataclass(frozen=True)
class MsMatrix:
    """One reduced block: its index s, the (kr-s+1) x (kc-s+1) matrix, and
    how many times its diagonal form repeats in the full diagonal form."""

    s: int
    entries: IntMatrix
    multiplicity: int


@dataclass(frozen=True)
class SpectrumEntry:
    eigenvalue: int
    multiplicity: int


@dataclass(frozen=True)
class BlockReport:
    s: int
    matrix: IntMatrix
    multiplicity: int
    delta: tuple[int, ...]   # diagonal-form entries incl. trailing zeros
    rank: int


@dataclass(frozen=True)
class SmithGroupResult:
    params: SchemeParams
    coeffs: tuple[int, ...]
    lam: int
    group: AbelianGroup
    blocks: tuple[BlockReport, ...]


def _check_coeffs(p: SchemeParams, coeffs, lam: int) -> tuple[int, ...]:
    if coeffs is None:
        coeffs = unit_coeffs(p)
    coeffs = tuple(int(b) for b in coeffs)
    if len(coeffs) != p.kr + 1:
        raise ParameterError(
            f"need kr+1 = {p.kr + 1} coefficients b_0..b_kr, got {len(coeffs)}")
    if not p.square:
        if lam != 0:
            raise ParameterError(
                "a diagonal shift is only defined for square parameters")
        if sum(1 for b in coeffs if b) > 1:
            raise ParameterError(
                "multi-coefficient combinations need kr == kc")
    return coeffs


def block_multiplicity(n: int, s: int) -> int:
    """C(n,s) - 2C(n,s-1) + C(n,s-2) = mu_s - mu_{s-1}."""
    return binomial(n, s) - 2 * binomial(n, s - 1) + binomial(n, s - 2)


def ms_matrix(s: int, p: SchemeParams, coeffs=None, lam: int = 0) -> MsMatrix:
    """The block M_s with entries -lam*delta_{ij} + C(j-s,i-s) * sum_l b_l f_i(j),
    indexed by s <= i <= kr, s <= j <= kc.  Upper triangular when square."""
    coeffs = _check_coeffs(p, coeffs, lam)
    if not 0 <= s <= p.kr:
        raise ParameterError(f"need 0 <= s <= kr, got s={s}")
    per_ell = [SchemeParams(p.n, p.kr, p.kc, ell) for ell in range(p.kr + 1)]
    data = []
    for i in range(s, p.kr + 1):
        row = []
        for j in range(s, p.kc + 1):
            v = binomial(j - s, i - s) * sum(
                b * f_coeff(i, j, q) for b, q in zip(coeffs, per_ell) if b)
            if lam and i == j:
                v -= lam
            row.append(v)
        data.append(row)
    return MsMatrix(s, IntMatrix(data), block_multiplicity(p.n, s))


def ms_matrices(p: SchemeParams, coeffs=None, lam: int = 0) -> list[MsMatrix]:
    return [ms_matrix(s, p, coeffs, lam) for s in range(p.kr + 1)]


def _require_large_n(p: SchemeParams) -> None:
    if p.n < 3 * p.kc - 1:
        raise ParameterError(
            f"the block reduction assumes n >= 3*kc - 1 (here n >= {3 * p.kc - 1}); "
            f"for n={p.n} use the brute-force oracle instead")


def smith_group(p: SchemeParams, coeffs=None, lam: int = 0,
                e_family: str | None = None) -> SmithGroupResult:
    """Smith group of sum_l b_l A_{n,kr,kc,l} - lam*I via the M_s blocks.

    Requires n >= 3*kc - 1, the range where the W blocks are known to be
    simultaneously diagonalizable.  With e_family set ("recursive" or
    "superstandard"), the corresponding unimodular family is actually
    constructed and validated first (cached per n); by default the formula
    is applied directly.
    """
    coeffs = _check_coeffs(p, coeffs, lam)
    _require_large_n(p)
    if e_family is not None:
        e_matrices(p.n, p.kc, e_family)
    blocks = []
    entries: list[tuple[int, int]] = []
    used_rank = 0
    for m in ms_matrices(p, coeffs, lam):
        snf = smith_normal_form(m.entries)
        slots = min(m.entries.rows, m.entries.cols)
        delta = snf.invariant_factors + (0,) * (slots - snf.rank)
        blocks.append(BlockReport(m.s, m.entries, m.multiplicity, delta, snf.rank))
        entries.extend((d, m.multiplicity) for d in snf.invariant_factors)
        used_rank += snf.rank * m.multiplicity
    free_rank = comb(p.n, p.kc) - used_rank
    entries.append((0, free_rank))
    return SmithGroupResult(p, coeffs, lam, group_from_diagonal(entries),
                            tuple(blocks))


def diagonal_form_entries(result: SmithGroupResult) -> list[tuple[int, int]]:
    """Pooled (entry, multiplicity) pairs of the assembled diagonal form,
    in block order; multiplicities already folded in."""
    out = []
    for b in result.blocks:
        for d in b.delta:
            out.append((d, b.multiplicity))
    return out


def eigenvalues(p: SchemeParams, coeffs=None, lam: int = 0) -> list[SpectrumEntry]:
    """Spectrum sum_l b_l f_i(i) - lam with multiplicity mu_i, i = 0..k."""
    if not p.square:
        raise ParameterError("eigenvalues need square parameters kr == kc")
    coeffs = _check_coeffs(p, coeffs, lam)
    _require_large_n(p)
    per_ell = [SchemeParams(p.n, p.kr, p.kc, ell) for ell in range(p.kr + 1)]
    out = []
    for i in range(p.kr + 1):
        ev = sum(b * f_coeff(i, i, q) for b, q in zip(coeffs, per_ell) if b) - lam
        out.append(SpectrumEntry(ev, mu(p.n, i)))
    return out
