"""Exact integer matrices, Smith normal form, and abelian group invariants.

Everything here is exact.  The Smith reduction and matrix products run on a
numpy int64 fast lane while every entry stays below 2**31 (quotient times
entry then fits in int64 with room to spare) and fall back to Python's
arbitrary-precision integers the moment that bound is threatened, so entry
growth can never silently corrupt a result.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, gcd, prod
from itertools import combinations

import numpy as np

# Entries at or above this bound leave the int64 lane.
_FAST_LIMIT = 1 << 31


class ExactError(ValueError):
    """Precondition violation in an exact-linear-algebra operation."""


class ConstructionError(RuntimeError):
    """A construction whose success is guaranteed by theory failed."""


class IntMatrix:
    """Dense integer matrix with optional subsets labelling rows/columns."""

    __slots__ = ("rows", "cols", "data", "row_labels", "col_labels")

    def __init__(self, data, row_labels=None, col_labels=None,
                 cols: int | None = None):
        data = [list(row) for row in data]
        rows = len(data)
        if rows:
            width = len(data[0])
            if cols is not None and cols != width:
                raise ExactError("explicit column count does not match data")
            cols = width
        elif cols is None:
            cols = 0
        if any(len(row) != cols for row in data):
            raise ExactError("ragged rows")
        if row_labels is not None:
            row_labels = tuple(row_labels)
            if len(row_labels) != rows:
                raise ExactError("row label count does not match row count")
        if col_labels is not None:
            col_labels = tuple(col_labels)
            if len(col_labels) != cols:
                raise ExactError("column label count does not match column count")
        self.rows = rows
        self.cols = cols
        self.data = data
        self.row_labels = row_labels
        self.col_labels = col_labels

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        data = [[0] * n for _ in range(n)]
        for i in range(n):
            data[i][i] = 1
        return cls(data)

    @classmethod
    def diagonal(cls, entries, rows: int | None = None,
                 cols: int | None = None) -> "IntMatrix":
        entries = list(entries)
        if rows is None:
            rows = len(entries)
        if cols is None:
            cols = len(entries)
        if len(entries) > min(rows, cols):
            raise ExactError("too many diagonal entries for the given shape")
        out = cls.zeros(rows, cols)
        for i, e in enumerate(entries):
            out.data[i][i] = e
        return out

    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def entry(self, i: int, j: int) -> int:
        return self.data[i][j]

    def row(self, i: int) -> list[int]:
        return list(self.data[i])

    def column(self, j: int) -> list[int]:
        return [row[j] for row in self.data]

    def max_abs(self) -> int:
        best = 0
        for row in self.data:
            for v in row:
                a = -v if v < 0 else v
                if a > best:
                    best = a
        return best

    def transpose(self) -> "IntMatrix":
        if self.rows == 0 or self.cols == 0:
            out = IntMatrix.zeros(self.cols, self.rows)
        else:
            out = IntMatrix([list(col) for col in zip(*self.data)])
        out.row_labels = self.col_labels
        out.col_labels = self.row_labels
        return out

    def submatrix(self, row_idx, col_idx) -> "IntMatrix":
        row_idx = list(row_idx)
        col_idx = list(col_idx)
        data = [[self.data[i][j] for j in col_idx] for i in row_idx]
        rl = (tuple(self.row_labels[i] for i in row_idx)
              if self.row_labels is not None else None)
        cl = (tuple(self.col_labels[j] for j in col_idx)
              if self.col_labels is not None else None)
        return IntMatrix(data, row_labels=rl, col_labels=cl, cols=len(col_idx))

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix([[c * v for v in row] for row in self.data],
                         cols=self.cols)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape() != other.shape():
            raise ExactError("shape mismatch in addition")
        return IntMatrix([[a + b for a, b in zip(r1, r2)]
                          for r1, r2 in zip(self.data, other.data)],
                         cols=self.cols)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape() != other.shape():
            raise ExactError("shape mismatch in subtraction")
        return IntMatrix([[a - b for a, b in zip(r1, r2)]
                          for r1, r2 in zip(self.data, other.data)],
                         cols=self.cols)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ExactError("shape mismatch in product")
        if self.rows == 0 or other.cols == 0:
            return IntMatrix.zeros(self.rows, other.cols)
        # int64 products are exact as long as no dot product can reach 2**62.
        ma, mb = self.max_abs(), other.max_abs()
        if ma and mb and self.cols * ma * mb < (1 << 62):
            a = np.array(self.data, dtype=np.int64)
            b = np.array(other.data, dtype=np.int64)
            return IntMatrix((a @ b).tolist())
        out = [[0] * other.cols for _ in range(self.rows)]
        bdata = other.data
        for i, arow in enumerate(self.data):
            acc = out[i]
            for t, v in enumerate(arow):
                if v:
                    brow = bdata[t]
                    for j, w in enumerate(brow):
                        if w:
                            acc[j] += v * w
        return IntMatrix(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape() == other.shape() and self.data == other.data

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(r) for r in self.data)))

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows}x{self.cols})"

    def pretty(self) -> str:
        """Fixed-width rendering, one matrix row per line."""
        if self.rows == 0 or self.cols == 0:
            return f"(empty {self.rows}x{self.cols})"
        width = max(len(str(v)) for row in self.data for v in row)
        return "\n".join(" ".join(f"{v:>{width}}" for v in row)
                         for row in self.data)

    def to_text(self) -> str:
        """Plain-text exchange format: 'rows cols' then one line per row."""
        lines = [f"{self.rows} {self.cols}"]
        lines.extend(" ".join(str(v) for v in row) for row in self.data)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "IntMatrix":
        lines = text.splitlines()
        if not lines:
            raise ExactError("empty matrix file")
        head = lines[0].split()
        if len(head) != 2:
            raise ExactError("first line must be 'rows cols'")
        rows, cols = int(head[0]), int(head[1])
        data = []
        for line in lines[1:]:
            if line.strip() == "" and len(data) >= rows:
                continue
            data.append([int(tok) for tok in line.split()])
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ExactError("matrix body does not match declared shape")
        if rows == 0:
            out = cls.zeros(0, cols)
            return out
        return cls(data)


def stack(parts) -> IntMatrix:
    """Vertical concatenation of matrices sharing a column count."""
    parts = list(parts)
    if not parts:
        raise ExactError("cannot stack zero matrices")
    cols = parts[0].cols
    if any(p.cols != cols for p in parts):
        raise ExactError("stacked parts must share the column count")
    data = []
    for p in parts:
        data.extend(list(row) for row in p.data)
    labels = None
    if all(p.row_labels is not None for p in parts):
        labels = tuple(lbl for p in parts for lbl in p.row_labels)
    col_labels = parts[0].col_labels
    if any(p.col_labels != col_labels for p in parts):
        col_labels = None
    return IntMatrix(data, row_labels=labels, col_labels=col_labels, cols=cols)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithForm:
    """Invariant factors d_1 | d_2 | ... | d_r plus optional transforms.

    When transforms are present, left @ M @ right equals the diagonal
    matrix of the invariant factors padded with zeros, and both transforms
    are unimodular.
    """

    invariant_factors: tuple[int, ...]
    rank: int
    left: IntMatrix | None = None
    right: IntMatrix | None = None

    def diagonal_matrix(self, rows: int, cols: int) -> IntMatrix:
        return IntMatrix.diagonal(self.invariant_factors, rows, cols)


def _chain_fix_values(diag: list[int]) -> list[int]:
    """Turn positive diagonal values into the divisibility chain."""
    ds = sorted(diag)
    changed = True
    while changed:
        changed = False
        for i in range(len(ds)):
            di = ds[i]
            for j in range(i + 1, len(ds)):
                if ds[j] % di:
                    g = gcd(di, ds[j])
                    ds[j] = di // g * ds[j]
                    ds[i] = di = g
                    changed = True
    return ds


def _diagonalize_fast(a: np.ndarray) -> tuple[list[int], bool]:
    """Reduce an int64 matrix to diagonal values.

    Returns (pivots found so far, finished).  Quotients are rounded to
    nearest so remainders stay within half a pivot.  The array is mutated
    in place; when finished is False the entries got close to the int64
    ceiling and the array holds an exact intermediate state with the first
    len(pivots) rows and columns fully cleared, ready for the slow lane.
    """
    m, n = a.shape
    t = 0
    diag: list[int] = []
    limit = min(m, n)
    while t < limit:
        sub = np.abs(a[t:, t:])
        if sub.size == 0:
            break
        if int(sub.max(initial=0)) >= _FAST_LIMIT:
            return diag, False
        nz = sub[sub > 0]
        if nz.size == 0:
            break
        target = int(nz.min())
        cand = np.argwhere(sub == target)
        if cand.shape[0] > 1:
            # among minimal entries prefer the sparsest row/column pair;
            # this keeps fill-in (and hence entry growth) down
            mask = sub > 0
            rowcnt = mask.sum(axis=1)
            colcnt = mask.sum(axis=0)
            scores = (rowcnt[cand[:, 0]] - 1) * (colcnt[cand[:, 1]] - 1)
            bi, bj = cand[int(np.argmin(scores))]
        else:
            bi, bj = cand[0]
        bi, bj = int(bi) + t, int(bj) + t
        if bi != t:
            a[[t, bi]] = a[[bi, t]]
        if bj != t:
            a[:, [t, bj]] = a[:, [bj, t]]
        if a[t, t] < 0:
            a[t] = -a[t]
        while True:
            if int(np.abs(a[t:, t:]).max(initial=0)) >= _FAST_LIMIT:
                return diag, False
            p = int(a[t, t])
            half = p >> 1
            col = a[t + 1:, t]
            nzr = np.nonzero(col)[0]
            if nzr.size:
                idx = nzr + t + 1
                q = (col[nzr] + half) // p
                a[idx] -= q[:, None] * a[t]
                rem = a[t + 1:, t]
                nzr = np.nonzero(rem)[0]
                if nzr.size:
                    # a remainder smaller than the pivot exists; promote it
                    r = int(nzr[np.argmin(np.abs(rem[nzr]))]) + t + 1
                    a[[t, r]] = a[[r, t]]
                    if a[t, t] < 0:
                        a[t] = -a[t]
                    continue
            # column is clear; with column t zero elsewhere, reducing the
            # pivot row by column operations only touches row t
            p = int(a[t, t])
            half = p >> 1
            rowr = a[t, t + 1:]
            nzc = np.nonzero(rowr)[0]
            if nzc.size:
                q = (rowr[nzc] + half) // p
                a[t, nzc + t + 1] -= q * p
                if np.any(a[t, t + 1:]):
                    break  # smaller entries appeared; re-pick the pivot
            diag.append(p)
            t += 1
            break
    return diag, True


class _ExactReducer:
    """List-based Smith reduction with optional transform tracking."""

    def __init__(self, data, rows, cols, want_transforms, want_right_inv=False):
        self.a = [list(r) for r in data]
        self.m = rows
        self.n = cols
        self.left = None
        self.right = None
        self.right_inv = None
        if want_transforms:
            self.left = [[int(i == j) for j in range(rows)] for i in range(rows)]
            self.right = [[int(i == j) for j in range(cols)] for i in range(cols)]
        if want_right_inv:
            self.right_inv = [[int(i == j) for j in range(cols)] for i in range(cols)]

    # elementary row operations -------------------------------------------
    def row_swap(self, i, j):
        a = self.a
        a[i], a[j] = a[j], a[i]
        if self.left is not None:
            self.left[i], self.left[j] = self.left[j], self.left[i]

    def row_negate(self, i):
        self.a[i] = [-v for v in self.a[i]]
        if self.left is not None:
            self.left[i] = [-v for v in self.left[i]]

    def row_addmul(self, i, j, c):
        """row_i += c * row_j"""
        if c == 0:
            return
        self.a[i] = [x + c * y for x, y in zip(self.a[i], self.a[j])]
        if self.left is not None:
            self.left[i] = [x + c * y for x, y in zip(self.left[i], self.left[j])]

    # elementary column operations ------------------------------------------
    def col_swap(self, i, j):
        for row in self.a:
            row[i], row[j] = row[j], row[i]
        if self.right is not None:
            for row in self.right:
                row[i], row[j] = row[j], row[i]
        if self.right_inv is not None:
            ri = self.right_inv
            ri[i], ri[j] = ri[j], ri[i]

    def col_negate(self, i):
        for row in self.a:
            row[i] = -row[i]
        if self.right is not None:
            for row in self.right:
                row[i] = -row[i]
        if self.right_inv is not None:
            self.right_inv[i] = [-v for v in self.right_inv[i]]

    def col_addmul(self, i, j, c):
        """col_i += c * col_j"""
        if c == 0:
            return
        for row in self.a:
            row[i] += c * row[j]
        if self.right is not None:
            for row in self.right:
                row[i] += c * row[j]
        if self.right_inv is not None:
            # inverse picks up the inverse operation on the left
            self.right_inv[j] = [x - c * y for x, y in
                                 zip(self.right_inv[j], self.right_inv[i])]

    # ------------------------------------------------------------------
    def _pivot(self, t):
        best = None
        bi = bj = -1
        a = self.a
        for i in range(t, self.m):
            row = a[i]
            for j in range(t, self.n):
                v = row[j]
                if v:
                    av = -v if v < 0 else v
                    if best is None or av < best:
                        best, bi, bj = av, i, j
                        if av == 1:
                            return bi, bj
        if best is None:
            return None
        return bi, bj

    def diagonalize(self):
        t = 0
        limit = min(self.m, self.n)
        diag = []
        while t < limit:
            loc = self._pivot(t)
            if loc is None:
                break
            bi, bj = loc
            if bi != t:
                self.row_swap(t, bi)
            if bj != t:
                self.col_swap(t, bj)
            if self.a[t][t] < 0:
                self.row_negate(t)
            while True:
                p = self.a[t][t]
                half = p >> 1
                dirty = False
                for i in range(t + 1, self.m):
                    v = self.a[i][t]
                    if v:
                        self.row_addmul(i, t, -((v + half) // p))
                        if self.a[i][t]:
                            dirty = True
                if dirty:
                    best = None
                    br = -1
                    for i in range(t + 1, self.m):
                        v = self.a[i][t]
                        if v:
                            av = -v if v < 0 else v
                            if best is None or av < best:
                                best, br = av, i
                    self.row_swap(t, br)
                    if self.a[t][t] < 0:
                        self.row_negate(t)
                    continue
                p = self.a[t][t]
                half = p >> 1
                rdirty = False
                for j in range(t + 1, self.n):
                    v = self.a[t][j]
                    if v:
                        self.col_addmul(j, t, -((v + half) // p))
                        if self.a[t][j]:
                            rdirty = True
                if rdirty:
                    break  # smaller entry now lives in row t; re-pivot
                diag.append(p)
                t += 1
                break
        return diag

    def fix_divisibility(self, rank):
        """Repair the chain among diagonal positions 0..rank-1 in place."""
        a = self.a
        changed = True
        while changed:
            changed = False
            for i in range(rank):
                for j in range(i + 1, rank):
                    di, dj = a[i][i], a[j][j]
                    if dj % di == 0:
                        continue
                    changed = True
                    self.row_addmul(i, j, 1)          # (i,j) entry becomes dj
                    g, x, y = _xgcd(di, dj)
                    # unimodular column mix sending (di, dj) -> (g, 0)
                    self._col_pair(i, j, x, y, -(dj // g), di // g)
                    # now a[j][i] == y*dj; clear it with a row operation
                    self.row_addmul(j, i, -(self.a[j][i] // g))
                    if self.a[i][i] < 0:
                        self.row_negate(i)
                    if self.a[j][j] < 0:
                        self.row_negate(j)

    def _col_pair(self, i, j, w, x, y, z):
        """(col_i, col_j) <- (w*col_i + x*col_j, y*col_i + z*col_j), det wz-xy = +-1."""
        for row in self.a:
            ci, cj = row[i], row[j]
            row[i] = w * ci + x * cj
            row[j] = y * ci + z * cj
        if self.right is not None:
            for row in self.right:
                ci, cj = row[i], row[j]
                row[i] = w * ci + x * cj
                row[j] = y * ci + z * cj
        if self.right_inv is not None:
            ri, rj = self.right_inv[i], self.right_inv[j]
            det = w * z - x * y
            # inverse of [[w, y], [x, z]] acting on rows i, j of the inverse
            self.right_inv[i] = [(z * a - y * b) * det for a, b in zip(ri, rj)]
            self.right_inv[j] = [(-x * a + w * b) * det for a, b in zip(ri, rj)]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """g, x, y with x*a + y*b == g == gcd(a, b), g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _diagonal_values(m: IntMatrix) -> list[int]:
    """Positive diagonal values of some diagonal form of m (no chain yet).

    Starts on the int64 lane; if entries approach the int64 ceiling the
    partially reduced (still exact) trailing block is handed to the
    arbitrary-precision reducer.
    """
    if m.rows == 0 or m.cols == 0:
        return []
    diag: list[int] = []
    rest_rows = m.data
    if m.max_abs() < _FAST_LIMIT:
        a = np.array(m.data, dtype=np.int64)
        diag, finished = _diagonalize_fast(a)
        if finished:
            return diag
        t = len(diag)
        rest_rows = a[t:, t:].tolist()
    red = _ExactReducer(rest_rows, len(rest_rows),
                        len(rest_rows[0]) if rest_rows else 0,
                        want_transforms=False)
    diag.extend(red.diagonalize())
    return diag


def smith_normal_form(m: IntMatrix, with_transforms: bool = False) -> SmithForm:
    """The unique nonnegative divisibility-chain diagonal form of m.

    With transforms, also returns unimodular left (rows x rows) and right
    (cols x cols) with left @ m @ right equal to the padded diagonal.
    """
    if not with_transforms:
        diag = _diagonal_values(m)
        chained = _chain_fix_values(diag)
        return SmithForm(tuple(chained), len(chained))
    red = _ExactReducer(m.data, m.rows, m.cols, want_transforms=True)
    diag = red.diagonalize()
    rank = len(diag)
    red.fix_divisibility(rank)
    factors = tuple(red.a[i][i] for i in range(rank))
    return SmithForm(factors, rank,
                     left=IntMatrix(red.left) if red.left else IntMatrix.zeros(0, 0),
                     right=IntMatrix(red.right) if red.right else IntMatrix.zeros(0, 0))


def rank(m: IntMatrix) -> int:
    return smith_normal_form(m).rank


def index(m: IntMatrix) -> int:
    """Product of the invariant factors; 1 for rank zero."""
    return prod(smith_normal_form(m).invariant_factors, start=1)


def is_unimodular(m: IntMatrix) -> bool:
    """True iff m is square with determinant +-1."""
    if m.rows != m.cols:
        return False
    if m.rows == 0:
        return True
    snf = smith_normal_form(m)
    return snf.rank == m.rows and all(d == 1 for d in snf.invariant_factors)


def _bareiss_det(grid: list[list[int]]) -> int:
    """Fraction-free determinant of a small dense submatrix."""
    a = [row[:] for row in grid]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pkk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            rowi = a[i]
            rowk = a[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * pkk - aik * rowk[j]) // prev
            rowi[k] = 0
        prev = pkk
    return sign * a[n - 1][n - 1]


def gcd_minors(m: IntMatrix, order: int) -> int:
    """gcd of all order x order minor determinants (0 when all vanish).

    Meant for the small block matrices; refuses anything bigger than 8 on
    either side since the minor count explodes combinatorially.
    """
    if order < 1 or order > min(m.rows, m.cols):
        raise ExactError(f"minor order {order} out of range for {m.rows}x{m.cols}")
    if max(m.rows, m.cols) > 8:
        raise ExactError("gcd_minors is restricted to matrices of dimension <= 8")
    g = 0
    for rows in combinations(range(m.rows), order):
        for cols in combinations(range(m.cols), order):
            d = _bareiss_det([[m.data[i][j] for j in cols] for i in rows])
            g = gcd(g, d)
            if g == 1:
                return 1
    return g


def unimodular_inverse(m: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular matrix."""
    if m.rows != m.cols:
        raise ExactError("only square matrices can be unimodular")
    snf = smith_normal_form(m, with_transforms=True)
    if snf.rank != m.rows or any(d != 1 for d in snf.invariant_factors):
        raise ExactError("matrix is not unimodular")
    # left @ m @ right == I  =>  m^{-1} == right @ left
    return snf.right @ snf.left


# ---------------------------------------------------------------------------
# Unimodular completion

_COMPLETION_PRIME = (1 << 31) - 1


class _ModRankTracker:
    """Incremental row rank over F_p; used to pre-screen completion rows.

    The basis is kept fully reduced (each pivot row is zero at every other
    pivot column), so reducing a candidate needs a single pass.
    """

    def __init__(self, cols: int, p: int = _COMPLETION_PRIME):
        self.p = p
        self.pivots: dict[int, np.ndarray] = {}

    def try_add(self, vec: np.ndarray) -> bool:
        p = self.p
        v = vec % p
        for col, prow in self.pivots.items():
            if v[col]:
                v = (v - v[col] * prow) % p
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        col = int(nz[0])
        inv = pow(int(v[col]), -1, p)
        prow = (v * inv) % p
        for c2, row2 in self.pivots.items():
            if row2[col]:
                self.pivots[c2] = (row2 - row2[col] * prow) % p
        self.pivots[col] = prow
        return True

    def add_rows(self, rows) -> int:
        added = 0
        for row in rows:
            if self.try_add(np.array([x % self.p for x in row], dtype=np.int64)):
                added += 1
        return added


def unimodular_completion(m: IntMatrix) -> IntMatrix:
    """Extend a full-row-rank index-1 matrix to a square unimodular one.

    First adjoins standard basis rows greedily (checking the final result
    for unimodularity); if that candidate is not unimodular, falls back to
    a completion read off the Smith transforms, which always succeeds for
    index-1 full-rank input.
    """
    r, c = m.rows, m.cols
    if r > c:
        raise ExactError("completion needs rows <= cols")
    base = smith_normal_form(m)
    if base.rank != r or any(d != 1 for d in base.invariant_factors):
        raise ExactError("completion needs full row rank and index 1")
    if r == c:
        return m

    tracker = _ModRankTracker(c)
    added = tracker.add_rows(m.data)
    chosen: list[int] = []
    if added == r:
        unit = np.zeros(c, dtype=np.int64)
        for j in range(c):
            if len(chosen) == c - r:
                break
            unit[:] = 0
            unit[j] = 1
            if tracker.try_add(unit):
                chosen.append(j)
        if len(chosen) == c - r:
            data = [list(row) for row in m.data]
            for j in chosen:
                row = [0] * c
                row[j] = 1
                data.append(row)
            candidate = IntMatrix(data)
            if is_unimodular(candidate):
                return candidate

    # Smith-transform fallback: with L m R = [I | 0], the bottom rows of
    # R^{-1} extend m to a product of unimodular matrices.
    red = _ExactReducer(m.data, r, c, want_transforms=True, want_right_inv=True)
    diag = red.diagonalize()
    if len(diag) != r or any(abs(d) != 1 for d in diag):
        raise ConstructionError("input lost full rank or index 1 during reduction")
    data = [list(row) for row in m.data]
    data.extend(list(row) for row in red.right_inv[r:])
    candidate = IntMatrix(data)
    if not is_unimodular(candidate):
        raise ConstructionError("unimodular completion failed")
    return candidate


# ---------------------------------------------------------------------------
# Finitely generated abelian groups


def _factorize(v: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while v % p == 0:
            out[p] = out.get(p, 0) + 1
            v //= p
    f = 7
    step = 4
    while f * f <= v:
        while v % f == 0:
            out[f] = out.get(f, 0) + 1
            v //= f
        f += step
        step = 6 - step
    if v > 1:
        out[v] = out.get(v, 0) + 1
    return out


@dataclass(frozen=True)
class AbelianGroup:
    """Canonical form: invariant factors > 1 in a divisibility chain."""

    invariant_factors: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        facs = self.invariant_factors
        if any(d <= 1 for d in facs):
            raise ExactError("invariant factors must all exceed 1")
        if any(facs[i + 1] % facs[i] for i in range(len(facs) - 1)):
            raise ExactError("invariant factors must form a divisibility chain")
        if self.free_rank < 0:
            raise ExactError("free rank must be nonnegative")

    def is_trivial(self) -> bool:
        return not self.invariant_factors and self.free_rank == 0

    def order(self) -> int:
        """Order of the torsion part."""
        return prod(self.invariant_factors, start=1)

    def __str__(self) -> str:
        terms = []
        i = 0
        facs = self.invariant_factors
        while i < len(facs):
            j = i
            while j < len(facs) and facs[j] == facs[i]:
                j += 1
            count = j - i
            term = f"Z/{facs[i]}"
            terms.append(term if count == 1 else f"({term})^{count}")
            i = j
        if self.free_rank:
            terms.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(terms) if terms else "0"

    def to_json_dict(self) -> dict:
        return {"invariant_factors": list(self.invariant_factors),
                "free_rank": self.free_rank}

    @classmethod
    def from_json_dict(cls, d: dict) -> "AbelianGroup":
        return group_from_diagonal([(int(v), 1) for v in d["invariant_factors"]]
                                   + [(0, int(d["free_rank"]))])


def group_from_smith(snf: SmithForm, ambient_cols: int) -> AbelianGroup:
    """Smith group Z^cols / row span, given the SNF of the relation matrix."""
    facs = tuple(d for d in snf.invariant_factors if d != 1)
    return AbelianGroup(facs, ambient_cols - snf.rank)


def group_from_diagonal(entries) -> AbelianGroup:
    """Canonicalize a multiset of diagonal entries given as (value, multiplicity).

    Zeros contribute to the free rank, signs are ignored, and +-1 entries
    are dropped; the rest is rebuilt into invariant factors by collecting
    prime powers and zipping them largest-first.
    """
    free = 0
    exps: dict[int, list[int]] = {}
    for value, mult in entries:
        if mult < 0:
            raise ExactError("multiplicities must be nonnegative")
        if mult == 0:
            continue
        v = abs(value)
        if v == 0:
            free += mult
            continue
        if v == 1:
            continue
        for p, e in _factorize(v).items():
            exps.setdefault(p, []).extend([e] * mult)
    for p in exps:
        exps[p].sort(reverse=True)
    depth = max((len(v) for v in exps.values()), default=0)
    factors = []
    for i in range(depth):
        f = prod(p ** es[i] for p, es in exps.items() if i < len(es))
        factors.append(f)
    factors.reverse()
    return AbelianGroup(tuple(factors), free)
